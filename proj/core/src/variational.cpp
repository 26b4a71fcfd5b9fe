#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dnscatter/errors.hpp"
#include "dnscatter/matcher.hpp"

namespace dnscatter {

double d2_functional(const Eigen::MatrixXd& B, const Eigen::VectorXcd& psi,
                     const Eigen::VectorXcd& phi) {
    const Eigen::VectorXcd Bphi = B.cast<cplx>() * phi;
    return phi.dot(Bphi).real() - 2.0 * psi.dot(phi).real();
}

VariationalResult solve_d2_variational(const Eigen::VectorXcd& psi, const ScatteringConfig& cfg,
                                       int N, StepRule rule, double gradient_tol,
                                       int max_iterations, const SolverOptions& opts) {
    if (psi.size() != N) {
        throw InvalidArgument("psi has " + std::to_string(psi.size()) +
                              " coefficients, expected N=" + std::to_string(N));
    }
    if (!(gradient_tol > 0.0)) throw InvalidArgument("gradient tolerance must be > 0");
    if (max_iterations <= 0) {
        max_iterations = rule == StepRule::ConjugateGradient ? 20 * N + 100 : 200000;
    }

    const Eigen::MatrixXcd B = d2_matrix(cfg, N, opts).cast<cplx>();
    const double target = gradient_tol * std::max(1.0, 2.0 * psi.norm());

    // grad F = 2 (B phi - psi) = -2 r
    VariationalResult out;
    out.phi = Eigen::VectorXcd::Zero(N);
    Eigen::VectorXcd r = psi;
    Eigen::VectorXcd p = r;
    double rr = r.squaredNorm();
    int it = 0;
    for (; it < max_iterations && 2.0 * std::sqrt(rr) > target; ++it) {
        if (rule == StepRule::SteepestDescent) p = r;
        const Eigen::VectorXcd Bp = B * p;
        const double pBp = p.dot(Bp).real();
        if (!(pBp > 0.0)) break;
        // exact minimiser of F(phi + a p) over real a (B Hermitian)
        const double a = p.dot(r).real() / pBp;
        out.phi += a * p;
        if ((it + 1) % 50 == 0) {
            r = psi - B * out.phi;  // refresh against drift
        } else {
            r -= a * Bp;
        }
        const double rr_new = r.squaredNorm();
        if (rule == StepRule::ConjugateGradient) p = r + (rr_new / rr) * p;
        rr = rr_new;
    }
    r = psi - B * out.phi;
    out.iterations = it;
    out.gradient_norm = 2.0 * r.norm();
    out.functional = d2_functional(B.real(), psi, out.phi);
    if (!(out.gradient_norm <= target)) {
        std::ostringstream msg;
        msg << "variational solve stalled after " << it << " iterations, gradient norm "
            << out.gradient_norm;
        throw NonConvergence(msg.str(), out.gradient_norm);
    }
    return out;
}

}  // namespace dnscatter
