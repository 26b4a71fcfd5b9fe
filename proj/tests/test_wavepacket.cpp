#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dnscatter/errors.hpp"
#include "dnscatter/wavepacket.hpp"

using namespace dnscatter;

namespace {

const Geometry g1(1.0);
const double h = g1.half_pi_over_d();
const double tu = time_unit(g1);

PacketSetup small_setup(int nodes = 32) {
    PacketSetup s;
    s.envelope = Envelope::quadratic_spline(0.5 * h, 1.0 * h);
    s.N = 60;
    s.quad.nodes_per_panel = nodes;
    return s;
}

double integrate_sq(const Envelope& e) {
    const int n = 200000;
    const double dk = (e.beta() - e.alpha()) / n;
    double s = 0;
    for (int i = 0; i < n; ++i) s += std::pow(e(e.alpha() + (i + 0.5) * dk), 2);
    return s * dk;
}

}  // namespace

TEST_CASE("envelope normalisation and support") {
    for (auto shape : {Envelope::Shape::Bump, Envelope::Shape::QuadraticSpline}) {
        const Envelope e(0.5 * h, 1.0 * h, shape);
        CHECK(integrate_sq(e) == doctest::Approx(1 / (2 * std::numbers::pi)).epsilon(1e-6));
        CHECK(e(0.49 * h) == 0.0);
        CHECK(e(1.01 * h) == 0.0);
        CHECK(e(0.75 * h) > 0.0);
    }
    CHECK(Envelope::bump(1, 2).breakpoints().size() == 5);
    CHECK(Envelope::quadratic_spline(1, 2).breakpoints().size() == 4);
    CHECK_THROWS_AS(Envelope::bump(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Envelope::bump(1.0, 1.0), InvalidArgument);
}

TEST_CASE("quadratic spline is C^1 with jumps in a''") {
    const Envelope e = Envelope::quadratic_spline(1.0, 4.0);
    const double dk = 1e-4;
    for (double knot : e.breakpoints()) {
        const double d_left = (e(knot) - e(knot - dk)) / dk;
        const double d_right = (e(knot + dk) - e(knot)) / dk;
        CHECK(std::abs(d_left - d_right) < 1e-3);
        const double dd_left = (e(knot - 2 * dk) - 2 * e(knot - dk) + e(knot)) / (dk * dk);
        const double dd_right = (e(knot) - 2 * e(knot + dk) + e(knot + 2 * dk)) / (dk * dk);
        CHECK(std::abs(dd_left - dd_right) > 1e-2);
    }
}

TEST_CASE("window validation") {
    CHECK(validate_window(Envelope::bump(0.5 * h, 1.0 * h), 1, g1).alpha() == 0.5 * h);
    const double th = std::sqrt(8.0) * h;
    try {
        validate_window(Envelope::bump(2.5 * h, 3.0 * h), 1, g1);
        FAIL("expected WindowViolation");
    } catch (const WindowViolation& e) {
        CHECK(e.threshold() == doctest::Approx(th));
    }
    CHECK_NOTHROW(validate_window(Envelope::bump(2.5 * h, 3.0 * h), 2, g1));
    CHECK_THROWS_AS(validate_window(Envelope::bump(0.5, 1.0), 0, g1), InvalidArgument);
}

TEST_CASE("decay fit on synthetic power laws") {
    std::vector<std::pair<double, double>> half, one, neg;
    for (double t : {10.0, 20.0, 40.0, 80.0}) {
        half.emplace_back(t, 3.0 / std::sqrt(t));
        one.emplace_back(t, 2.0 / t);
        neg.emplace_back(-t, 3.0 / std::sqrt(t));
    }
    CHECK(decay_fit(half).slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(decay_fit(half).r2 == doctest::Approx(1.0));
    CHECK(decay_fit(one).slope == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(decay_fit(neg).slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::exp(decay_fit(one).intercept) == doctest::Approx(2.0));
    CHECK_THROWS_AS(decay_fit({{1, 1}, {2, 1}, {3, 1}}), InvalidArgument);
    CHECK_THROWS_AS(decay_fit({{-1, 1}, {2, 1}, {3, 1}, {4, 1}}), InvalidArgument);
}

TEST_CASE("packet model: unitarity, evanescent decay, convergence, transport") {
    const PacketModel m(small_setup());
    CHECK(m.n1() == 1);
    CHECK(m.node_count() == 3 * 32);
    double prev_evan = 1e9, prev_dist = 1e9, prev_dist_minus = 1e9;
    for (double t : {2.0, 10.0, 40.0}) {
        CHECK(m.total_norm(t * tu) == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(m.total_norm(-t * tu) == doctest::Approx(1.0).epsilon(1e-4));
        const double ev = m.evanescent_norm(t * tu);
        CHECK(ev < prev_evan);
        prev_evan = ev;
        const double dp = m.convergence_distance(t * tu).distance;
        const double dm = m.convergence_distance(-t * tu).distance;
        CHECK(dp < prev_dist);
        CHECK(dm < prev_dist_minus);
        prev_dist = dp;
        prev_dist_minus = dm;
    }
    CHECK(prev_dist < 1e-2);
    CHECK(prev_dist_minus < 1e-2);

    // Transmitted centroid moves at about the group velocity 2k at the window centre.
    const double v =
        (m.transmitted_centroid(40 * tu) - m.transmitted_centroid(20 * tu)) / (20 * tu);
    CHECK(v == doctest::Approx(2 * 0.75 * h).epsilon(0.03));
}

TEST_CASE("field snapshots") {
    const PacketModel m(small_setup(16));
    GridSpec grid;
    grid.X = 4.0;
    grid.dx = 0.25;
    grid.dy = 0.125;
    const FieldSnapshot f = m.evolve(0.0, grid);
    CHECK(f.nx == 33);
    CHECK(f.ny == 9);
    CHECK(f.values.size() == 33u * 9u);
    CHECK(f.x(0) == doctest::Approx(-4.0));
    // Dirichlet walls: y = 0 on the left, y = d on the right.
    CHECK(std::abs(f.at(4, 0)) < 1e-12);
    CHECK(std::abs(f.at(28, 8)) < 1e-12);
    const AsymptoticPair a = m.asymptotes(0.0, grid);
    CHECK(a.psi_minus.values.size() == f.values.size());
    CHECK(a.psi_plus.values.size() == f.values.size());
}

TEST_CASE("quadrature self-check") {
    CHECK(quadrature_self_check(small_setup(32), 40 * tu, 1e-8) < 1e-8);
    CHECK_THROWS_AS(quadrature_self_check(small_setup(24), 80 * tu, 1e-8), QuadratureUnderResolved);
}

TEST_CASE("packet setup guards") {
    PacketSetup s = small_setup();
    s.N = 0;
    CHECK_THROWS_AS(PacketModel{s}, InvalidArgument);
    s = small_setup();
    s.envelope = Envelope::bump(2.5 * h, 3.0 * h);
    CHECK_THROWS_AS(PacketModel{s}, WindowViolation);
}

namespace {

// Trapezoid in y, plain sum in x (the packets vanish at the x ends).
double grid_norm(const FieldSnapshot& s) {
    double a = 0;
    for (int ix = 0; ix < s.nx; ++ix)
        for (int iy = 0; iy < s.ny; ++iy) {
            const double w = (iy == 0 || iy == s.ny - 1) ? 0.5 : 1.0;
            a += w * std::norm(s.at(ix, iy));
        }
    return std::sqrt(a * s.dx * s.dy);
}

}  // namespace

TEST_CASE("asymptotic states on a grid") {
    const PacketModel m(small_setup());
    GridSpec grid;
    grid.X = 120;
    grid.dx = 0.05;
    grid.dy = 1.0 / 32;
    const AsymptoticPair a0 = m.asymptotes(0.0, grid);
    const AsymptoticPair a1 = m.asymptotes(10 * tu, grid);
    // Free one-channel evolution keeps its norm.
    CHECK(grid_norm(a0.psi_minus) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(grid_norm(a1.psi_minus) == doctest::Approx(grid_norm(a0.psi_minus)).epsilon(1e-8));

    // Far to the left at t = 0 the full field is incident plus reflected open
    // channels; the closed-channel remainder has decayed like e^{kappa x}.
    const FieldSnapshot f = m.evolve(0.0, grid);
    double peak = 0, rest = 0;
    for (int ix = 0; ix < f.nx; ++ix)
        for (int iy = 0; iy < f.ny; ++iy) {
            peak = std::max(peak, std::abs(f.at(ix, iy)));
            if (f.x(ix) < -10)
                rest = std::max(rest, std::abs(f.at(ix, iy) - a0.psi_minus.at(ix, iy) -
                                               a0.psi_plus.at(ix, iy)));
        }
    CHECK(rest < 1e-8 * peak);
    CHECK(grid_norm(f) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("no asymptotics at t = 0") {
    const PacketModel m(small_setup());
    CHECK(m.convergence_distance(0.0).distance > 0.1);
}

TEST_CASE("default setup uses the smooth bump") {
    const PacketSetup s;
    CHECK(s.envelope.shape() == Envelope::Shape::Bump);
    CHECK(s.envelope.alpha() == doctest::Approx(0.5 * Geometry(1.0).half_pi_over_d()));
    CHECK_NOTHROW(validate_window(s.envelope, s.n0, s.geom));
}
