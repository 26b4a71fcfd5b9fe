#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dnscatter/matcher.hpp"

namespace dnscatter {

// Relative sine-side H^{1/2} distance between the formula and central
// difference derivatives of the trace at step h.
double dphi_relative_error(const ScatteringConfig& cfg, int N, double h,
                           const SolverOptions& opts = {});

// Reference configuration for the k-derivative check: n0 = 1, d = 1,
// k = 2.83 pi/2d, just above the second threshold where the trace varies fast
// enough for the difference quotient to be truncation dominated at h = 1e-5.
ScatteringConfig dphi_reference_config();

// Random off-threshold configs: n0 in {1, 2}, d = 1, k uniform in
// [0.1, 5] pi/2d, redrawn if within 1e-3 pi/2d of a threshold.
std::vector<ScatteringConfig> random_configs(std::uint64_t seed, int count);

struct ValidationOptions {
    std::uint64_t seed = 20240611;
    int N = 200;
    int configs = 20;
    int overlap_nmax = 50;
    // Closed form under test; replaceable to check that the suite notices.
    std::function<double(int, int)> overlap_fn = [](int n, int m) { return overlap(n, m); };
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;  // worst observed
    double limit = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const;
    std::string to_text() const;
    std::string to_json() const;
};

ValidationReport run_validation(const ValidationOptions& opts = {});

}  // namespace dnscatter
