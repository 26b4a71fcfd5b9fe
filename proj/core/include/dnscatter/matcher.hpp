#pragma once

// Truncated mode-matching solver.
//
// The junction trace phi = f(0,.) is expanded in the sine basis, phi = sum c_n chi^-_n,
// and the derivative matching condition D phi = -2ik chi^-_{n0} with
//
//     D = sum_n lambda_n (p^-_n + p^+_n),   lambda_n = -i k_n (open),  kappa_n (closed)
//
// is tested against chi^-_1..chi^-_N. Cosine projections enter through the overlap
// matrix O, giving the N x N Galerkin matrix A = Lambda + O Lambda O^T.
// Reflection and transmission follow from the two expansions of phi:
//     r = c - e_{n0},   t_m = sum_n O_{nm} c_n.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dnscatter/dispersion.hpp"

namespace dnscatter {

using cplx = std::complex<double>;

// Side the incident wave arrives from. Left: e^{ikx} chi^-_{n0} from x = -inf.
// Right: e^{-ikx} chi^+_{n0} from x = +inf (mirror image of the left problem).
enum class Incidence { Left, Right };

struct SolverOptions {
    // Absolute momentum margin around thresholds; <= 0 selects
    // default_threshold_margin(geom).
    double threshold_margin = 0.0;
    // Solve even inside the threshold margin (never exactly on a threshold).
    bool force = false;
    // Cosine modes kept for t (and the continuity residual); 0 selects 2N.
    int nt = 0;
    Incidence incidence = Incidence::Left;
};

// sqrt(sum_n n^{2 alpha} |c_n|^2) with c_n = coeffs[n-1].
double norm_weighted(double alpha, std::span<const cplx> coeffs);
double norm_weighted(double alpha, const Eigen::VectorXcd& coeffs);

struct TruncatedOperator {
    ScatteringConfig cfg;
    int N = 0;
    ChannelData chan;
    Eigen::VectorXcd lambda;  // diagonal of Lambda, length N
    Eigen::MatrixXd overlap;  // O_N
    Eigen::MatrixXcd A;
    double cond_estimate = 0.0;  // 1-norm condition number estimate of A

    int n1() const { return chan.n1; }
};

// Lambda diagonal for modes 1..N: -i k_n (n <= n1), kappa_n (n > n1).
Eigen::VectorXcd channel_eigenvalues(const ChannelData& chan, int N);

TruncatedOperator assemble(const ScatteringConfig& cfg, int N, const SolverOptions& opts = {});

struct TraceSolution {
    ScatteringConfig cfg;
    Incidence incidence = Incidence::Left;
    int N = 0;
    int Nt = 0;
    int n1 = 0;
    Eigen::VectorXcd c;  // trace in the sine basis (length N)
    Eigen::VectorXcd r;  // reflection coefficients, incident side basis
    Eigen::VectorXcd t;  // transmission coefficients, far side basis
    double residual_cont = 0.0;
    double residual_deriv = 0.0;
    double cond = 0.0;
};

TraceSolution solve_matching(const ScatteringConfig& cfg, int N, const SolverOptions& opts = {});

// Same equation solved through D_2^{-1}: with the open-channel part written
// as D_1 = U S U^T (U = [e_1..e_n1 | O columns 1..n1], S = diag(k_l, k_l)),
//     (I - i M) phi_1 = S^{1/2} U^T D_2^{-1} b,   M = S^{1/2} U^T D_2^{-1} U S^{1/2},
//     c = D_2^{-1} (b + i U S^{1/2} phi_1).
struct SplitSolution {
    TraceSolution solution;
    Eigen::MatrixXd M;                    // real symmetric, 2 n1 x 2 n1
    Eigen::VectorXcd m_eigenvalues;       // from a general (non-symmetric) solver
    double max_eig_imag = 0.0;            // max |Im lambda_j|
    double min_abs_one_minus_i_lambda = 0.0;
};

SplitSolution solve_matching_split(const ScatteringConfig& cfg, int N,
                                   const SolverOptions& opts = {});

// H^{1/2} norm of the cosine coefficients t_m, N < m <= Nt, of the truncated
// trace: the part the N-term right-hand expansion cannot represent.
double residual_continuity(const TraceSolution& sol, int Nt);

struct DerivativeResidual {
    double galerkin = 0.0;           // H^{-1/2} norm on tested modes j <= N
    double tail = 0.0;               // H^{-1/2} norm on N < j <= Ntest
    double total = 0.0;
    double relative_galerkin = 0.0;  // galerkin / ||right-hand side||_{-1/2}
};

// (D phi + 2ik chi^-_{n0}) tested against sine modes j <= Ntest, with the
// operator truncated to the N resolved cosine modes.
DerivativeResidual residual_derivative_parts(const TraceSolution& sol, int Ntest);
double residual_derivative(const TraceSolution& sol, int Ntest);

// Spectral norm of G^{-1/2} A G^{-1/2}, G = W + O W O^T, W = diag(n): the
// operator norm H^{1/2} -> H^{-1/2} restricted to the truncated sine span, with
// the H^{1/2} norm taken over both expansions of the trace.
double weighted_operator_norm(const TruncatedOperator& op);

// Galerkin matrix of D_2 (closed channels only), real symmetric N x N.
Eigen::MatrixXd d2_matrix(const ScatteringConfig& cfg, int N, const SolverOptions& opts = {});

struct D2Report {
    int n1 = 0;
    double min_eig = 0.0;           // smallest eigenvalue of the Hermitian part
    double sym_defect = 0.0;        // max|B^{-1} - B^{-T}| / max|B^{-1}|
    double coercivity_const = 0.0;  // inf (D2 phi, phi) / ||phi||^2 over the sine span
    double kappa_next = 0.0;        // kappa_{n1+1}
    double eta_bound = 0.0;         // kappa_{n1+1} eta_{n1}^2
    double projection_bound = 0.0;  // kappa_{n1+1} (1 - eps_{n1})
};

D2Report d2_check(const ScatteringConfig& cfg, int N, const SolverOptions& opts = {});

// Cosines of principal angles between span{chi^-_1..N} and span{chi^+_1..N}.
// eps is the largest one (the largest singular value of O_N) and
// eta = sqrt(1 - eps^2). eps approaches 1 faster than double precision can
// resolve, so the complements are evaluated in multiprecision and returned
// separately; eps itself may round to 1.0 for N >~ 12.
struct BasisAngle {
    double eps = 0.0;
    double eta = 0.0;
    double one_minus_eps = 0.0;
    int precision_digits = 0;

    bool eps_strictly_inside_unit_interval() const { return eps > 0.0 && one_minus_eps > 0.0; }
};

BasisAngle estimate_basis_angle(int N);

enum class StepRule { ConjugateGradient, SteepestDescent };

struct VariationalResult {
    Eigen::VectorXcd phi;
    double functional = 0.0;     // F(phi) = (D2 phi, phi) - 2 Re (psi, phi)
    double gradient_norm = 0.0;  // ||2 (D2 phi - psi)||
    int iterations = 0;
};

double d2_functional(const Eigen::MatrixXd& B, const Eigen::VectorXcd& psi,
                     const Eigen::VectorXcd& phi);

// Minimises F over the truncated sine span by exact line search. Stops when
// ||grad|| <= gradient_tol * max(1, ||2 psi||); throws NonConvergence otherwise.
VariationalResult solve_d2_variational(const Eigen::VectorXcd& psi, const ScatteringConfig& cfg,
                                       int N, StepRule rule = StepRule::ConjugateGradient,
                                       double gradient_tol = 1e-10, int max_iterations = 0,
                                       const SolverOptions& opts = {});

enum class DerivativeMode { Formula, FiniteDifference };

// d c / d k. Formula: -A^{-1} (dA/dk) c - 2i A^{-1} e_{n0}. FiniteDifference:
// central difference of solve_matching with step h; requires the same n1 at
// k - h and k + h (WindowViolation otherwise).
Eigen::VectorXcd dphi_dk(const ScatteringConfig& cfg, int N, DerivativeMode mode, double h = 1e-5,
                         const SolverOptions& opts = {});

}  // namespace dnscatter
