#include "dnscatter/modes.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "dnscatter/errors.hpp"

namespace dnscatter {

namespace {

constexpr double kPi = std::numbers::pi;

void require_mode_index(int n, const char* name) {
    if (n < 1) {
        throw InvalidArgument(std::string("mode index ") + name + " must be >= 1, got " +
                              std::to_string(n));
    }
}

// Integral over s in [0, pi/2] of sin(2L s), divided by 2: zero for even L,
// 1/L for odd L (L may be negative).
double half_sine_integral(int L) {
    if (L % 2 == 0) return 0.0;
    return 1.0 / static_cast<double>(L);
}

}  // namespace

Geometry::Geometry(double width) : d(width) {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw InvalidArgument("waveguide width d must be finite and > 0, got " +
                              std::to_string(width));
    }
}

double Geometry::half_pi_over_d() const { return kPi / (2.0 * d); }

double mu(int n, const Geometry& geom) {
    require_mode_index(n, "n");
    const double q = (2.0 * n - 1.0) * kPi / (2.0 * geom.d);
    return q * q;
}

double chi(ModeBasis basis, int n, double y, const Geometry& geom) {
    require_mode_index(n, "n");
    if (!(y >= 0.0 && y <= geom.d)) {
        throw InvalidArgument("transverse coordinate y=" + std::to_string(y) +
                              " outside [0, d]");
    }
    const double norm = std::sqrt(2.0 / geom.d);
    // Exact zeros at the Dirichlet endpoints rather than sin(pi) ~ 1e-16.
    if (basis == ModeBasis::Sine && y == 0.0) return 0.0;
    if (basis == ModeBasis::Cosine && y == geom.d) return 0.0;
    const double arg = (2.0 * n - 1.0) * kPi * y / (2.0 * geom.d);
    return basis == ModeBasis::Sine ? norm * std::sin(arg) : norm * std::cos(arg);
}

double overlap(int n, int m) {
    require_mode_index(n, "n");
    require_mode_index(m, "m");
    // sin(a y) cos(b y) = [sin((a+b)y) + sin((a-b)y)] / 2 with a+b and a-b both
    // even multiples of pi/2d; exactly one of n+m-1, n-m is odd.
    return (2.0 / kPi) * (half_sine_integral(n + m - 1) + half_sine_integral(n - m));
}

OverlapMatrix::OverlapMatrix(int N) : OverlapMatrix(N, N) {}

OverlapMatrix::OverlapMatrix(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw InvalidArgument("overlap matrix dimensions must be >= 1");
    }
    entries_.resize(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            entries_(i, j) = overlap(i + 1, j + 1);
        }
    }
}

OverlapMatrix overlap_matrix(int N) { return OverlapMatrix(N); }

double overlap_quadrature(int n, int m, double tol, ModeBasis left, ModeBasis right) {
    require_mode_index(n, "n");
    require_mode_index(m, "m");
    if (!(tol > 0.0)) {
        throw InvalidArgument("quadrature tolerance must be > 0");
    }
    const Geometry unit(1.0);
    auto integrand = [&](double y) {
        // Guard against the nodes landing a rounding error outside [0, 1].
        const double yc = std::clamp(y, 0.0, 1.0);
        return chi(left, n, yc, unit) * chi(right, m, yc, unit);
    };
    // The integrand is bounded by 2 on [0,1], so its L1 norm is <= 2 and a
    // relative target of tol/2 keeps the absolute error estimate below tol.
    // Deep bisection of an oscillatory integrand piles roundoff into Boost's
    // summed error estimate, so shallow depth limits are tried first.
    double value = 0.0;
    double error = std::numeric_limits<double>::infinity();
    for (unsigned max_depth : {6u, 10u, 15u, 25u}) {
        double e = 0.0;
        double l1 = 0.0;
        const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, 0.0, 1.0, max_depth, 0.5 * tol, &e, &l1);
        if (e < error) {
            error = e;
            value = v;
        }
        if (error <= tol) break;
    }
    if (!(error <= tol)) {
        std::ostringstream msg;
        msg << "overlap quadrature (" << n << "," << m << ") error estimate " << error
            << " above tolerance " << tol;
        throw QuadratureFailed(msg.str());
    }
    return value;
}

}  // namespace dnscatter
