#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "dnscatter/errors.hpp"
#include "dnscatter/observables.hpp"
#include "dnscatter/report_writers.hpp"

using namespace dnscatter;

TEST_CASE("unit conversion round trip") {
    const Geometry g(2.5);
    CHECK(to_absolute(1.0, MomentumUnits::HalfPiOverD, g) == doctest::Approx(g.half_pi_over_d()));
    CHECK(to_absolute(3.0, MomentumUnits::Absolute, g) == 3.0);
    CHECK(from_absolute(to_absolute(0.7, MomentumUnits::HalfPiOverD, g), MomentumUnits::HalfPiOverD,
                        g) == doctest::Approx(0.7));
}

TEST_CASE("probabilities of a synthetic unit transmission") {
    const Geometry g(1.0);
    TraceSolution s;
    s.cfg = ScatteringConfig(g, 1, 0.5 * g.half_pi_over_d());
    s.N = 4;
    s.Nt = 8;
    s.n1 = 1;
    s.r = Eigen::VectorXcd::Zero(4);
    s.t = Eigen::VectorXcd::Zero(8);
    s.t(0) = 1.0;
    const ChannelProbabilities p = probabilities(s);
    CHECK(p.n1 == 1);
    CHECK(p.PT[0] == 1.0);
    CHECK(p.PR[0] == 0.0);
    CHECK(p.flux_defect == 0.0);
}

TEST_CASE("probabilities are weighted by k_m / k") {
    const Geometry g(1.0);
    TraceSolution s;
    s.cfg = ScatteringConfig(g, 1, 4.0 * g.half_pi_over_d());  // two open channels
    s.N = 3;
    s.Nt = 6;
    s.r = Eigen::VectorXcd::Zero(3);
    s.t = Eigen::VectorXcd::Zero(6);
    s.r(1) = 1.0;
    const ChannelProbabilities p = probabilities(s);
    REQUIRE(p.n1 == 2);
    const ChannelData ch = channels(s.cfg, 4);
    CHECK(p.PR[1] == doctest::Approx(ch.k_channel(2) / s.cfg.k));
    CHECK(p.flux_defect == doctest::Approx(1 - ch.k_channel(2) / s.cfg.k));
}

TEST_CASE("single channel at large N conserves flux") {
    const Geometry g(1.0);
    const auto p = probabilities(solve_matching({g, 1, 0.9 * g.half_pi_over_d()}, 400));
    CHECK(p.PR[0] + p.PT[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("scan: grid, threshold bookkeeping, channel opening") {
    ScanOptions o;
    o.n0 = 1;
    o.k_min = 0.05 * o.geom.half_pi_over_d();
    o.k_max = 5.0 * o.geom.half_pi_over_d();
    o.steps = 100;
    o.N = 60;
    o.jobs = 2;
    const ScanTable t = scan(o);
    CHECK(t.rows.size() + t.skipped_k.size() == 100);
    CHECK(t.failed_rows() == 0);
    // Thresholds inside [0.05, 5] pi/2d: sqrt((2n-1)^2 - 1) for n = 2, 3.
    REQUIRE(t.thresholds.size() == 2);
    CHECK(t.thresholds[0] == doctest::Approx(std::sqrt(8.0) * o.geom.half_pi_over_d()));
    CHECK(t.max_channels() == 3);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const ScanRow& r = t.rows[i];
        if (i) CHECK(r.k > t.rows[i - 1].k);
        int below = 1;
        for (double th : t.thresholds) below += th < r.k;
        CHECK(r.n1 == below);
        CHECK(r.flux_defect < 1e-10);
        for (int m = 0; m < r.n1; ++m) {
            CHECK(r.PR[m] >= 0.0);
            CHECK(r.PT[m] <= 1.0 + 1e-6);
        }
    }
    CHECK(t.rows.front().PR[0] > 0.98);
}

TEST_CASE("scan results do not depend on the worker count") {
    ScanOptions o;
    o.k_min = 0.2;
    o.k_max = 9.0;
    o.steps = 24;
    o.N = 40;
    o.jobs = 1;
    const ScanTable a = scan(o);
    o.jobs = 3;
    const ScanTable b = scan(o);
    std::ostringstream sa, sb;
    write_scan_csv(sa, a, MomentumUnits::Absolute);
    write_scan_csv(sb, b, MomentumUnits::Absolute);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("scan: failing rows are recorded, bad ranges rejected") {
    ScanOptions o;
    o.k_min = 0.5;
    o.k_max = 12.0;
    o.steps = 10;
    o.N = 1;  // too small once a second channel opens
    const ScanTable t = scan(o);
    CHECK(t.failed_rows() > 0);
    CHECK(t.failed_rows() < t.rows.size());
    for (const ScanRow& r : t.rows) {
        if (!r.ok) CHECK_FALSE(r.error.empty());
    }

    o.k_max = o.k_min;
    CHECK_THROWS_AS(scan(o), InvalidArgument);
    o.k_max = 2.0;
    o.steps = 1;
    CHECK_THROWS_AS(scan(o), InvalidArgument);
}

TEST_CASE("report writers") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);

    std::ostringstream modes;
    write_modes_csv(modes, Geometry(1.0), 2);
    std::string line;
    std::istringstream in(modes.str());
    std::getline(in, line);
    CHECK(line == "n,mu,O1,O2");
    std::getline(in, line);
    CHECK(line.rfind("1,", 0) == 0);

    ScanOptions o;
    o.k_min = 0.3;
    o.k_max = 6.0;
    o.steps = 8;
    o.N = 30;
    const ScanTable t = scan(o);
    std::ostringstream csv;
    write_scan_csv(csv, t, MomentumUnits::HalfPiOverD);
    std::istringstream cin(csv.str());
    std::getline(cin, line);
    CHECK(line == "k,n1,PR1,PR2,PT1,PT2,flux_defect,cond");
    std::getline(cin, line);
    // First row has one channel: PR2 and PT2 cells are empty.
    CHECK(line.find(",,") != std::string::npos);

    std::ostringstream s1, s2;
    write_scan_svg(s1, t, "t");
    write_scan_svg(s2, t, "t");
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().rfind("<svg", 0) == 0);
    CHECK(s1.str().find("stroke-dasharray") != std::string::npos);

    std::ostringstream dec;
    write_decay_csv(dec, {{10.0, 0.5}, {20.0, 0.25}});
    CHECK(dec.str() == "t,distance\n10,0.5\n20,0.25\n");
}

TEST_CASE("scan CSV round trip is exact") {
    ScanOptions o;
    o.k_min = 0.4;
    o.k_max = 8.0;
    o.steps = 12;
    o.N = 40;
    const ScanTable t = scan(o);
    std::ostringstream csv;
    write_scan_csv(csv, t, MomentumUnits::Absolute);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    const int m = t.max_channels();
    for (const ScanRow& r : t.rows) {
        REQUIRE(std::getline(in, line));
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        REQUIRE(cells.size() == static_cast<std::size_t>(2 * m + 4));
        CHECK(std::stod(cells[0]) == r.k);
        CHECK(std::stoi(cells[1]) == r.n1);
        for (int c = 0; c < r.n1; ++c) {
            CHECK(std::stod(cells[2 + c]) == r.PR[c]);
            CHECK(std::stod(cells[2 + m + c]) == r.PT[c]);
        }
        CHECK(std::stod(cells[2 + 2 * m]) == r.flux_defect);
        CHECK(std::stod(cells[3 + 2 * m]) == r.cond);
    }
}
