#include <doctest.h>

#include <cmath>
#include <set>

#include "dnscatter/dispersion.hpp"
#include "dnscatter/validation.hpp"

using namespace dnscatter;

TEST_CASE("random configurations are seeded and off threshold") {
    const auto a = random_configs(11, 30);
    const auto b = random_configs(11, 30);
    REQUIRE(a.size() == 30);
    std::set<int> modes;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].k == b[i].k);
        CHECK(a[i].n0 == b[i].n0);
        modes.insert(a[i].n0);
        const double kh = a[i].k / a[i].geom.half_pi_over_d();
        CHECK(kh >= 0.1);
        CHECK(kh <= 5.0);
        CHECK(threshold_distance(a[i].k, a[i].n0, a[i].geom) >= 1e-3 * a[i].geom.half_pi_over_d());
    }
    CHECK(modes == std::set<int>{1, 2});
    CHECK(random_configs(12, 1)[0].k != a[0].k);
}

TEST_CASE("reference derivative configuration") {
    const ScatteringConfig cfg = dphi_reference_config();
    CHECK(cfg.n0 == 1);
    CHECK(cfg.geom.d == 1.0);
    CHECK(cfg.k / cfg.geom.half_pi_over_d() == doctest::Approx(2.83));
    // Frozen from a run of this implementation at N = 200.
    const double e1 = dphi_relative_error(cfg, 200, 1e-5);
    const double e2 = dphi_relative_error(cfg, 200, 5e-6);
    CHECK(e1 == doctest::Approx(2.096e-6).epsilon(0.01));
    CHECK(e2 == doctest::Approx(5.239e-7).epsilon(0.01));
}

TEST_CASE("validation suite passes on a small default run") {
    ValidationOptions o;
    o.N = 80;
    o.configs = 4;
    o.overlap_nmax = 12;
    const ValidationReport rep = run_validation(o);
    for (const ValidationCheck& c : rep.checks) {
        INFO(c.name << ": " << c.value << " vs " << c.limit << " " << c.detail);
        CHECK(c.passed);
    }
    CHECK(rep.all_passed());
    CHECK(rep.to_text().find("PASS") != std::string::npos);
    CHECK(rep.to_json().front() == '{');
}

TEST_CASE("validation notices a sign error in the overlap") {
    ValidationOptions o;
    o.N = 40;
    o.configs = 2;
    o.overlap_nmax = 10;
    o.overlap_fn = [](int n, int m) { return (n + m) % 2 ? -overlap(n, m) : overlap(n, m); };
    const ValidationReport rep = run_validation(o);
    CHECK_FALSE(rep.all_passed());
    bool found = false;
    for (const ValidationCheck& c : rep.checks) {
        if (c.name == "overlap_vs_quadrature") {
            found = true;
            CHECK_FALSE(c.passed);
        }
    }
    CHECK(found);
}
