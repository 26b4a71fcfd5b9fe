#include <algorithm>
#include <cmath>
#include <string>

#include "dnscatter/errors.hpp"
#include "dnscatter/matcher.hpp"
#include "internal.hpp"

namespace dnscatter {

SplitSolution solve_matching_split(const ScatteringConfig& cfg, int N, const SolverOptions& opts) {
    const int Nt = detail::resolve_nt(N, opts);
    const ChannelData chan = detail::checked_closed_channels(cfg, N, opts);
    const int n1 = chan.n1;
    const Eigen::MatrixXd O = OverlapMatrix(N).matrix();

    const Eigen::MatrixXd B = d2_matrix(cfg, N, opts);
    const Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) {
        throw SolveFailed("closed-channel block not positive definite at k=" +
                          std::to_string(cfg.k));
    }

    // U S^{1/2}: columns e_l sqrt(k_l) followed by O(:, l) sqrt(k_l).
    Eigen::MatrixXd US(N, 2 * n1);
    US.setZero();
    for (int l = 1; l <= n1; ++l) {
        const double s = std::sqrt(chan.k_channel(l));
        US(l - 1, l - 1) = s;
        US.col(n1 + l - 1) = s * O.col(l - 1);
    }

    const Eigen::MatrixXd BinvUS = llt.solve(US);
    const Eigen::MatrixXd M = US.transpose() * BinvUS;

    const Eigen::VectorXcd b =
        cplx(0.0, -2.0 * cfg.k) * detail::incident_profile(cfg.n0, opts.incidence, N).cast<cplx>();
    Eigen::VectorXcd Binv_b(N);
    Binv_b.real() = llt.solve(b.real());
    Binv_b.imag() = llt.solve(b.imag());

    const Eigen::MatrixXcd I_minus_iM =
        Eigen::MatrixXcd::Identity(2 * n1, 2 * n1) - cplx(0.0, 1.0) * M.cast<cplx>();
    const Eigen::VectorXcd rhs = US.transpose().cast<cplx>() * Binv_b;
    const Eigen::VectorXcd phi1 = Eigen::PartialPivLU<Eigen::MatrixXcd>(I_minus_iM).solve(rhs);

    Eigen::VectorXcd c = Binv_b + cplx(0.0, 1.0) * (BinvUS.cast<cplx>() * phi1);
    if (!c.allFinite()) {
        throw SolveFailed("split solve produced non-finite coefficients at k=" +
                          std::to_string(cfg.k));
    }

    SplitSolution out;
    // Condition reported for the D_2 factor, the only N x N solve on this path.
    const double rcond = llt.rcond();
    out.solution = detail::build_solution(cfg, N, Nt, n1, opts.incidence, std::move(c),
                                          rcond > 0.0 ? 1.0 / rcond : INFINITY);
    out.M = M;
    // General eigensolver on purpose: realness of the spectrum is a check, not an assumption.
    const Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    out.m_eigenvalues = es.eigenvalues();
    out.max_eig_imag = out.m_eigenvalues.imag().cwiseAbs().maxCoeff();
    double lo = INFINITY;
    for (const cplx& lam : out.m_eigenvalues) {
        lo = std::min(lo, std::abs(cplx(1.0, 0.0) - cplx(0.0, 1.0) * lam));
    }
    out.min_abs_one_minus_i_lambda = lo;
    return out;
}

}  // namespace dnscatter
