#pragma once

// Transversal eigenmodes of the two reference strips and the cross-basis
// overlap integrals between them.
//
//   SINE   : chi^-_n(y) = sqrt(2/d) sin((2n-1) pi y / 2d)   Dirichlet y=0, Neumann y=d
//   COSINE : chi^+_n(y) = sqrt(2/d) cos((2n-1) pi y / 2d)   Neumann y=0, Dirichlet y=d
//
// Both families share the eigenvalues mu_n = (2n-1)^2 pi^2 / (4 d^2).

#include <Eigen/Dense>

namespace dnscatter {

struct Geometry {
    double d = 1.0;

    explicit Geometry(double width = 1.0);
    // Unit used on figure axes: momenta are reported as multiples of pi/(2d).
    double half_pi_over_d() const;
};

enum class ModeBasis { Sine, Cosine };

double mu(int n, const Geometry& geom);
double chi(ModeBasis basis, int n, double y, const Geometry& geom);

// Closed-form (chi^-_n, chi^+_m)_{L^2(0,d)}; independent of d.
double overlap(int n, int m);

// N x N matrix with O(n-1, m-1) = overlap(n, m). Rows index sine modes,
// columns cosine modes.
class OverlapMatrix {
public:
    explicit OverlapMatrix(int N);
    // Rectangular rows x cols block (rows sine modes, cols cosine modes).
    OverlapMatrix(int rows, int cols);

    int rows() const { return static_cast<int>(entries_.rows()); }
    int cols() const { return static_cast<int>(entries_.cols()); }
    double operator()(int n, int m) const { return entries_(n - 1, m - 1); }
    const Eigen::MatrixXd& matrix() const { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

OverlapMatrix overlap_matrix(int N);

// Adaptive Gauss-Kronrod evaluation of the defining integral (with d = 1) to
// absolute tolerance `tol`. Throws QuadratureFailed when the error estimate
// stays above `tol` at the subdivision cap.
double overlap_quadrature(int n, int m, double tol,
                          ModeBasis left = ModeBasis::Sine,
                          ModeBasis right = ModeBasis::Cosine);

}  // namespace dnscatter
