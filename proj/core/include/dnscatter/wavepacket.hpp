#pragma once

// Wave packets psi(t) = int a(k) e^{-i E(k) t} f(k, x, y) dk built from the
// stationary solutions at fixed Gauss-Legendre nodes in k, and their free
// asymptotes
//
//   psi^-(t)  incident channel only, on the whole line,
//   psi^+(t)  open reflected channels for x < 0, open transmitted channels for x > 0.
//
// Norms are evaluated mode by mode in y (both transverse bases are orthonormal):
// open channels by composite Simpson on an x-grid, closed channels in closed
// form from int e^{-(kappa + kappa') |x|} dx = 1 / (kappa + kappa').

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "dnscatter/matcher.hpp"

namespace dnscatter {

class Envelope {
public:
    enum class Shape {
        Bump,             // exp(-1 / (1 - s^2)), s in (-1, 1): C-infinity
        QuadraticSpline,  // uniform quadratic B-spline: exactly C^1, a'' jumps at the knots
    };

    // Window [alpha, beta] in absolute momentum units. The amplitude is scaled
    // so that int a^2 dk = 1 / (2 pi), which gives ||psi|| = 1.
    Envelope(double alpha, double beta, Shape shape);
    static Envelope bump(double alpha, double beta) { return {alpha, beta, Shape::Bump}; }
    static Envelope quadratic_spline(double alpha, double beta) {
        return {alpha, beta, Shape::QuadraticSpline};
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    Shape shape() const { return shape_; }
    double operator()(double k) const;
    // Quadrature panel ends: the spline knots, or four equal panels for the bump.
    std::vector<double> breakpoints() const;

private:
    double shape_value(double k) const;

    double alpha_;
    double beta_;
    Shape shape_;
    double scale_ = 1.0;
};

// Checks 0 < alpha < beta and that [alpha, beta] holds no threshold for n0
// (so n1 is constant on it). Throws WindowViolation naming the threshold.
const Envelope& validate_window(const Envelope& env, int n0, const Geometry& geom);

struct QuadSpec {
    int nodes_per_panel = 64;
};

struct PacketSetup {
    Geometry geom{1.0};
    int n0 = 1;
    // C-infinity bump on [0.5, 1] pi/2d for d = 1.
    Envelope envelope = Envelope::bump(0.25 * std::numbers::pi, 0.5 * std::numbers::pi);
    int N = 100;
    QuadSpec quad{};
    int jobs = 1;
    SolverOptions solver{};
};

// Sampling grid [-X, X] x [0, d]. X <= 0 means "choose from the packet extent".
struct GridSpec {
    double X = 0.0;
    double dx = 0.0;  // <= 0: d / 64
    double dy = 0.0;  // <= 0: d / 64
};

struct FieldSnapshot {
    double t = 0.0;
    double x_min = 0.0;
    double dx = 0.0;
    int nx = 0;
    double dy = 0.0;
    int ny = 0;
    std::vector<std::complex<double>> values;  // values[ix * ny + iy]

    double x(int ix) const { return x_min + ix * dx; }
    double y(int iy) const { return iy * dy; }
    std::complex<double> at(int ix, int iy) const {
        return values[static_cast<std::size_t>(ix) * static_cast<std::size_t>(ny) +
                      static_cast<std::size_t>(iy)];
    }
};

struct AsymptoticPair {
    FieldSnapshot psi_minus;
    FieldSnapshot psi_plus;
};

struct DistanceResult {
    double distance = 0.0;       // ||psi(t) - psi^{sign t}(t)||, psi^+ for t >= 0
    double X = 0.0;              // half-extent of the x-grid that was accepted
    double boundary_mass = 0.0;  // fraction of grid mass in the outer strips
};

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least squares of log distance against log |t|. Needs >= 4 samples with the
// same sign of t and distances above the double underflow floor.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& samples);

// Time unit used on reports: (pi / 2d)^{-2}.
double time_unit(const Geometry& geom);

class PacketModel {
public:
    // Solves the matching problem at every quadrature node (in parallel) and
    // keeps the coefficients; everything below reuses them.
    explicit PacketModel(const PacketSetup& setup);

    const PacketSetup& setup() const { return setup_; }
    int n1() const { return n1_; }
    int node_count() const { return static_cast<int>(k_.size()); }
    const std::vector<double>& nodes() const { return k_; }

    double total_norm(double t, const GridSpec& grid = {}) const;
    // L^2 norm of the closed-channel parts on both sides.
    double evanescent_norm(double t) const;
    DistanceResult convergence_distance(double t, const GridSpec& grid = {}) const;
    // Centroid in x of the open transmitted channels (x > 0).
    double transmitted_centroid(double t, const GridSpec& grid = {}) const;

    FieldSnapshot evolve(double t, const GridSpec& grid) const;
    AsymptoticPair asymptotes(double t, const GridSpec& grid) const;

private:
    struct Node {
        double k = 0.0;
        double E = 0.0;
        std::vector<double> k_open;     // k_l, l <= n1
        std::vector<double> kappa;      // kappa_n for n1 < n <= Nt
        Eigen::VectorXcd r;             // length N
        Eigen::VectorXcd t;             // length Nt
    };

    struct Sides;  // open-channel amplitudes on the x-grid at one time

    // w_q a(k_q) e^{-i E_q t}
    Eigen::VectorXcd phases(double t) const;
    double default_extent(double t) const;
    double dx_of(const GridSpec& g) const;
    Sides open_amplitudes(double t, double X, double dx) const;
    // Open channels on a grid of half-width X, expanded until the outer strips
    // hold less than 1e-6 of the mass.
    Sides open_amplitudes_auto(double t, const GridSpec& grid) const;
    double closed_left(const Eigen::VectorXcd& ph) const;
    double closed_right(const Eigen::VectorXcd& ph) const;
    enum class Part { Full, Incoming, Outgoing };
    FieldSnapshot sample(double t, const GridSpec& grid, Part part) const;

    PacketSetup setup_;
    int n1_ = 0;
    int Nt_ = 0;
    std::vector<double> k_;
    std::vector<double> wa_;  // quadrature weight times a(k)
    std::vector<Node> node_;
};

// Relative change of convergence_distance(t) when the nodes per panel double.
// Throws QuadratureUnderResolved above `tol`.
double quadrature_self_check(const PacketSetup& setup, double t, double tol);

}  // namespace dnscatter
