#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dnscatter/dispersion.hpp"
#include "dnscatter/errors.hpp"

using namespace dnscatter;
using std::numbers::pi;

TEST_CASE("energy") {
    const Geometry g(1.0);
    CHECK(energy({g, 1, 1.0}) == doctest::Approx(pi * pi / 4 + 1).epsilon(1e-15));
    CHECK(energy({g, 1, 1.0}) == doctest::Approx(3.46740110027));
    CHECK(energy({g, 2, 1.0}) == doctest::Approx(9 * pi * pi / 4 + 1).epsilon(1e-15));
    CHECK(energy({g, 1, 1e-9}) == doctest::Approx(mu(1, g)).epsilon(1e-15));
    CHECK_THROWS_AS(ScatteringConfig(g, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ScatteringConfig(g, 1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ScatteringConfig(g, 1, -2.0), InvalidArgument);
}

TEST_CASE("channel bookkeeping") {
    const Geometry g(1.0);
    const ChannelData a = channels({g, 1, 1.0}, 4);
    CHECK(a.n1 == 1);
    CHECK(a.k_channel(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.kappa(2) == doctest::Approx(std::sqrt(mu(2, g) - a.E)));
    CHECK(a.kappa(2) == doctest::Approx(4.3289).epsilon(1e-4));
    CHECK(a.kappa_evan.size() == 3);

    const ChannelData b = channels({g, 1, 5.0}, 6);
    CHECK(b.n1 == 2);
    CHECK(b.k_channel(1) == doctest::Approx(5.0));
    CHECK(b.k_channel(2) == doctest::Approx(2.2935).epsilon(1e-4));

    // k_{n0} = k for every n0, d.
    for (double d : {0.5, 1.0, 3.0})
        for (int n0 : {1, 2, 3}) {
            const ScatteringConfig cfg(Geometry(d), n0, 0.77);
            const ChannelData c = channels(cfg, max_excitable_mode(cfg) + 2);
            CHECK(c.n1 >= n0);
            CHECK(c.k_channel(n0) == doctest::Approx(0.77).epsilon(1e-13));
        }

    CHECK_THROWS_AS(channels({g, 1, 5.0}, 2), InvalidArgument);
}

TEST_CASE("max excitable mode matches the open channel count") {
    const Geometry g(1.0);
    for (int n0 : {1, 2, 3})
        for (double k = 0.05; k < 12.0; k += 0.37) {
            const ScatteringConfig cfg(g, n0, k);
            CHECK(max_excitable_mode(cfg) == channels(cfg, 40).n1);
        }
}

TEST_CASE("thresholds") {
    const Geometry g(1.0);
    const auto t1 = thresholds(1, g, 2);
    REQUIRE(t1.size() == 1);
    CHECK(t1[0] == doctest::Approx(std::sqrt(2 * pi * pi)));
    CHECK(t1[0] == doctest::Approx(4.44288).epsilon(1e-5));
    const auto t2 = thresholds(1, g, 3);
    CHECK(t2[1] == doctest::Approx(std::sqrt(6 * pi * pi)));
    CHECK(t2[1] == doctest::Approx(7.6953).epsilon(1e-4));
    const auto t3 = thresholds(2, g, 3);
    REQUIRE(t3.size() == 1);
    CHECK(t3[0] == doctest::Approx(2 * pi));
    CHECK_THROWS_AS(thresholds(2, g, 2), InvalidArgument);
}

TEST_CASE("threshold proximity and guards") {
    const Geometry g(1.0);
    const double th = std::sqrt(2 * pi * pi);
    CHECK(is_near_threshold(th, 1, g, 1e-12));
    CHECK_FALSE(is_near_threshold(2.0, 1, g, 1e-3));
    CHECK(is_near_threshold(4.44, 1, g, 0.01));
    CHECK(threshold_distance(4.44, 1, g) == doctest::Approx(th - 4.44));

    try {
        require_off_threshold({g, 1, th}, default_threshold_margin(g));
        FAIL("expected ThresholdDegenerate");
    } catch (const ThresholdDegenerate& e) {
        CHECK(e.threshold() == doctest::Approx(th));
    }
    CHECK_NOTHROW(require_off_threshold({g, 1, 2.0}, default_threshold_margin(g)));
    CHECK_THROWS_AS(channels({g, 1, th}, 5), ThresholdDegenerate);
}

TEST_CASE("newest channel momentum vanishes at its threshold") {
    const Geometry g(1.0);
    const double th = std::sqrt(2 * pi * pi);
    double prev = 1e9;
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const ChannelData c = channels({g, 1, th + delta}, 5);
        REQUIRE(c.n1 == 2);
        CHECK(c.k_channel(2) < prev);
        prev = c.k_channel(2);
    }
    CHECK(prev < 0.05);
}

TEST_CASE("evanescent growth: kappa_n / n between pi/2 and pi") {
    const Geometry g(1.0);
    const ChannelData c = channels({g, 1, 1.0}, 1000);
    double lo = 1e9, hi = 0;
    for (int n = 4; n <= 1000; ++n) {
        lo = std::min(lo, c.kappa(n) / n);
        hi = std::max(hi, c.kappa(n) / n);
    }
    CHECK(lo >= pi / 2);
    CHECK(hi <= pi);
    // Empirical constants for this config: kappa_n / n climbs towards pi.
    CHECK(lo == doctest::Approx(c.kappa(4) / 4));
    CHECK(hi == doctest::Approx(pi).epsilon(2e-3));
}

TEST_CASE("channel invariants on random configurations") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> kd(0.01, 30.0), dd(0.2, 3.0);
    std::uniform_int_distribution<int> nd(1, 4);
    for (int i = 0; i < 1000; ++i) {
        const ScatteringConfig cfg(Geometry(dd(rng)), nd(rng), kd(rng));
        if (is_near_threshold(cfg.k, cfg.n0, cfg.geom, default_threshold_margin(cfg.geom))) continue;
        const ChannelData c = channels(cfg, max_excitable_mode(cfg) + 5);
        const double E = energy(cfg);
        CHECK(mu(c.n1, cfg.geom) < E);
        CHECK(E < mu(c.n1 + 1, cfg.geom));
        for (int l = 2; l <= c.n1; ++l) CHECK(c.k_channel(l) < c.k_channel(l - 1));
        for (int n = c.n1 + 2; n <= c.nmax; ++n) CHECK(c.kappa(n) > c.kappa(n - 1));
        CHECK(c.k_channel(cfg.n0) == doctest::Approx(cfg.k).epsilon(1e-12));
    }
}
