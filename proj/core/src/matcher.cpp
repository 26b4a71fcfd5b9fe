#include "dnscatter/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dnscatter/errors.hpp"
#include "internal.hpp"

namespace dnscatter {

namespace detail {

double resolve_margin(const ScatteringConfig& cfg, const SolverOptions& opts) {
    return opts.threshold_margin > 0.0 ? opts.threshold_margin
                                       : default_threshold_margin(cfg.geom);
}

ChannelData checked_channels(const ScatteringConfig& cfg, int N, const SolverOptions& opts) {
    if (N < 1) {
        throw InvalidArgument("truncation order N must be >= 1, got " + std::to_string(N));
    }
    if (!opts.force) require_off_threshold(cfg, resolve_margin(cfg, opts));
    // One mode past the cutoff so that N = n1 (every resolved mode open) is allowed.
    ChannelData chan = channels(cfg, std::max(N, max_excitable_mode(cfg)) + 1);
    if (N < chan.n1) {
        throw InvalidArgument("truncation order N=" + std::to_string(N) +
                              " must be >= the number of open channels n1=" +
                              std::to_string(chan.n1));
    }
    return chan;
}

ChannelData checked_closed_channels(const ScatteringConfig& cfg, int N, const SolverOptions& opts) {
    ChannelData chan = checked_channels(cfg, N, opts);
    // B = Lambda_2 + O Lambda_2 O^T has rank <= 2 (N - n1), so it can only be
    // invertible on the N-dimensional sine span when N >= 2 n1.
    if (N < 2 * chan.n1) {
        throw InvalidArgument("closed-channel block needs N >= 2 n1 (N=" + std::to_string(N) +
                              ", n1=" + std::to_string(chan.n1) + ")");
    }
    return chan;
}

int resolve_nt(int N, const SolverOptions& opts) {
    const int nt = opts.nt > 0 ? opts.nt : 2 * N;
    if (nt < N) {
        throw InvalidArgument("Nt=" + std::to_string(nt) + " must be >= N=" + std::to_string(N));
    }
    return nt;
}

Eigen::VectorXd incident_profile(int n0, Incidence inc, int rows) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(rows);
    if (inc == Incidence::Left) {
        if (n0 <= rows) g(n0 - 1) = 1.0;
    } else {
        for (int j = 1; j <= rows; ++j) g(j - 1) = overlap(j, n0);
    }
    return g;
}

Eigen::MatrixXcd galerkin_matrix(const Eigen::MatrixXd& O, const Eigen::VectorXcd& lambda) {
    const Eigen::VectorXd re = lambda.real();
    const Eigen::VectorXd im = lambda.imag();
    Eigen::MatrixXd Pr = O * re.asDiagonal() * O.transpose();
    Eigen::MatrixXd Pi = O * im.asDiagonal() * O.transpose();
    Pr.diagonal() += re;
    Pi.diagonal() += im;
    Eigen::MatrixXcd A(O.rows(), O.rows());
    A.real() = Pr;
    A.imag() = Pi;
    return A;
}

TraceSolution build_solution(const ScatteringConfig& cfg, int N, int Nt, int n1, Incidence inc,
                             Eigen::VectorXcd c, double cond) {
    TraceSolution sol;
    sol.cfg = cfg;
    sol.incidence = inc;
    sol.N = N;
    sol.Nt = Nt;
    sol.n1 = n1;
    sol.cond = cond;

    const OverlapMatrix O(N, Nt);
    const Eigen::VectorXcd cosine = O.matrix().transpose() * c;  // length Nt
    if (inc == Incidence::Left) {
        sol.r = c;
        sol.r(cfg.n0 - 1) -= 1.0;
        sol.t = cosine;
    } else {
        sol.t = c;
        sol.r = cosine;
        sol.r(cfg.n0 - 1) -= 1.0;
    }
    sol.c = std::move(c);
    sol.residual_cont = residual_continuity(sol, Nt);
    sol.residual_deriv = residual_derivative(sol, Nt);
    return sol;
}

}  // namespace detail

double norm_weighted(double alpha, std::span<const cplx> coeffs) {
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double w = std::pow(static_cast<double>(i + 1), 2.0 * alpha);
        s += w * std::norm(coeffs[i]);
    }
    return std::sqrt(s);
}

double norm_weighted(double alpha, const Eigen::VectorXcd& coeffs) {
    return norm_weighted(alpha, std::span<const cplx>(coeffs.data(),
                                                      static_cast<std::size_t>(coeffs.size())));
}

Eigen::VectorXcd channel_eigenvalues(const ChannelData& chan, int N) {
    if (N > chan.nmax) throw InvalidArgument("channel data shorter than requested N");
    Eigen::VectorXcd lambda(N);
    for (int n = 1; n <= N; ++n) {
        lambda(n - 1) = n <= chan.n1 ? cplx(0.0, -chan.k_channel(n)) : cplx(chan.kappa(n), 0.0);
    }
    return lambda;
}

TruncatedOperator assemble(const ScatteringConfig& cfg, int N, const SolverOptions& opts) {
    TruncatedOperator op;
    op.cfg = cfg;
    op.N = N;
    op.chan = detail::checked_channels(cfg, N, opts);
    op.lambda = channel_eigenvalues(op.chan, N);
    op.overlap = OverlapMatrix(N).matrix();
    op.A = detail::galerkin_matrix(op.overlap, op.lambda);
    return op;
}

TraceSolution solve_matching(const ScatteringConfig& cfg, int N, const SolverOptions& opts) {
    const int Nt = detail::resolve_nt(N, opts);
    TruncatedOperator op = assemble(cfg, N, opts);

    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(op.A);
    const double rcond = lu.rcond();
    const Eigen::VectorXcd b =
        cplx(0.0, -2.0 * cfg.k) * detail::incident_profile(cfg.n0, opts.incidence, N).cast<cplx>();
    Eigen::VectorXcd c = lu.solve(b);
    if (!(rcond > 0.0) || !c.allFinite()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "matching system singular at k=" << cfg.k << " (N=" << N
            << ", reciprocal condition " << rcond << ")";
        throw SolveFailed(msg.str());
    }
    return detail::build_solution(cfg, N, Nt, op.n1(), opts.incidence, std::move(c), 1.0 / rcond);
}

double residual_continuity(const TraceSolution& sol, int Nt) {
    if (Nt < sol.N) {
        throw InvalidArgument("residual_continuity needs Nt >= N");
    }
    if (Nt == sol.N) return 0.0;
    double s = 0.0;
    for (int m = sol.N + 1; m <= Nt; ++m) {
        cplx tm = 0.0;
        for (int n = 1; n <= sol.N; ++n) tm += overlap(n, m) * sol.c(n - 1);
        s += m * std::norm(tm);
    }
    return std::sqrt(s);
}

DerivativeResidual residual_derivative_parts(const TraceSolution& sol, int Ntest) {
    if (Ntest < sol.N) {
        throw InvalidArgument("residual_derivative needs Ntest >= N");
    }
    const int N = sol.N;
    const ChannelData chan = channels(sol.cfg, std::max(N, sol.n1) + 1);
    const Eigen::VectorXcd lambda = channel_eigenvalues(chan, N);
    const OverlapMatrix O(Ntest, N);

    // Cosine coefficients of the trace on the resolved modes, weighted by lambda.
    const Eigen::VectorXcd lt =
        lambda.cwiseProduct(O.matrix().topRows(N).transpose() * sol.c);
    Eigen::VectorXcd res = O.matrix() * lt;
    res.head(N) += lambda.cwiseProduct(sol.c);
    const Eigen::VectorXd g = detail::incident_profile(sol.cfg.n0, sol.incidence, Ntest);
    const cplx two_ik(0.0, 2.0 * sol.cfg.k);
    res += two_ik * g.cast<cplx>();

    DerivativeResidual out;
    double sg = 0.0;
    double st = 0.0;
    double sb = 0.0;
    for (int j = 1; j <= Ntest; ++j) {
        const double w = 1.0 / j;
        (j <= N ? sg : st) += w * std::norm(res(j - 1));
        sb += w * std::norm(two_ik * g(j - 1));
    }
    out.galerkin = std::sqrt(sg);
    out.tail = std::sqrt(st);
    out.total = std::sqrt(sg + st);
    out.relative_galerkin = sb > 0.0 ? out.galerkin / std::sqrt(sb) : out.galerkin;
    return out;
}

double residual_derivative(const TraceSolution& sol, int Ntest) {
    return residual_derivative_parts(sol, Ntest).total;
}

double weighted_operator_norm(const TruncatedOperator& op) {
    const int N = op.N;
    const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(N, 1.0, static_cast<double>(N));
    Eigen::MatrixXd G = op.overlap * w.asDiagonal() * op.overlap.transpose();
    G.diagonal() += w;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const Eigen::MatrixXd Ginv_half = es.eigenvectors() *
                                      es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                                      es.eigenvectors().transpose();
    const Eigen::MatrixXcd X = Ginv_half.cast<cplx>() * op.A * Ginv_half.cast<cplx>();
    const Eigen::MatrixXcd XhX = X.adjoint() * X;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sv(XhX, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, sv.eigenvalues().maxCoeff()));
}

Eigen::MatrixXd d2_matrix(const ScatteringConfig& cfg, int N, const SolverOptions& opts) {
    const ChannelData chan = detail::checked_closed_channels(cfg, N, opts);
    Eigen::VectorXd kap = Eigen::VectorXd::Zero(N);
    for (int n = chan.n1 + 1; n <= N; ++n) kap(n - 1) = chan.kappa(n);
    const Eigen::MatrixXd O = OverlapMatrix(N).matrix();
    Eigen::MatrixXd B = O * kap.asDiagonal() * O.transpose();
    B.diagonal() += kap;
    return B;
}

D2Report d2_check(const ScatteringConfig& cfg, int N, const SolverOptions& opts) {
    const ChannelData chan = detail::checked_closed_channels(cfg, N, opts);
    const Eigen::MatrixXd B = d2_matrix(cfg, N, opts);

    D2Report rep;
    rep.n1 = chan.n1;
    const Eigen::MatrixXd H = 0.5 * (B + B.transpose());
    rep.min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly)
                      .eigenvalues()
                      .minCoeff();

    const Eigen::MatrixXd Binv = Eigen::PartialPivLU<Eigen::MatrixXd>(B).inverse();
    const double scale = Binv.cwiseAbs().maxCoeff();
    rep.sym_defect = (Binv - Binv.transpose()).cwiseAbs().maxCoeff() / scale;
    const Eigen::MatrixXd Hinv = 0.5 * (Binv + Binv.transpose());
    const double inv_max = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hinv, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .maxCoeff();
    rep.coercivity_const = 1.0 / inv_max;

    rep.kappa_next = std::sqrt(mu(chan.n1 + 1, cfg.geom) - chan.E);
    const BasisAngle ang = estimate_basis_angle(chan.n1);
    rep.eta_bound = rep.kappa_next * ang.eta * ang.eta;
    rep.projection_bound = rep.kappa_next * ang.one_minus_eps;
    return rep;
}

Eigen::VectorXcd dphi_dk(const ScatteringConfig& cfg, int N, DerivativeMode mode, double h,
                         const SolverOptions& opts) {
    if (mode == DerivativeMode::Formula) {
        const TruncatedOperator op = assemble(cfg, N, opts);
        Eigen::VectorXcd dlambda(N);
        for (int n = 1; n <= N; ++n) {
            dlambda(n - 1) = n <= op.n1() ? cplx(0.0, -cfg.k / op.chan.k_channel(n))
                                          : cplx(-cfg.k / op.chan.kappa(n), 0.0);
        }
        const Eigen::MatrixXcd dA = detail::galerkin_matrix(op.overlap, dlambda);
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(op.A);
        const Eigen::VectorXcd g =
            detail::incident_profile(cfg.n0, opts.incidence, N).cast<cplx>();
        const Eigen::VectorXcd c = lu.solve(cplx(0.0, -2.0 * cfg.k) * g);
        return lu.solve(-(dA * c) + cplx(0.0, -2.0) * g);
    }

    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument("finite-difference step h must be > 0");
    }
    if (!(cfg.k - h > 0.0)) {
        throw WindowViolation("k - h must stay positive", 0.0);
    }
    const ScatteringConfig lo(cfg.geom, cfg.n0, cfg.k - h);
    const ScatteringConfig hi(cfg.geom, cfg.n0, cfg.k + h);
    const int n1_lo = max_excitable_mode(lo);
    const int n1_hi = max_excitable_mode(hi);
    if (n1_lo != n1_hi) {
        const double th = std::sqrt(mu(n1_hi, cfg.geom) - mu(cfg.n0, cfg.geom));
        std::ostringstream msg;
        msg.precision(17);
        msg << "[k-h, k+h] = [" << lo.k << ", " << hi.k << "] crosses the threshold " << th;
        throw WindowViolation(msg.str(), th);
    }
    SolverOptions o = opts;
    o.nt = N;
    const TraceSolution a = solve_matching(lo, N, o);
    const TraceSolution b = solve_matching(hi, N, o);
    return (b.c - a.c) / (2.0 * h);
}

}  // namespace dnscatter
