#pragma once

#include <string>
#include <vector>

#include "dnscatter/matcher.hpp"

namespace dnscatter {

enum class MomentumUnits { Absolute, HalfPiOverD };

// Converts between the two momentum units for a given width.
double to_absolute(double k, MomentumUnits units, const Geometry& geom);
double from_absolute(double k, MomentumUnits units, const Geometry& geom);

// PR_m = (k_m / k) |r_m|^2, PT_m = (k_m / k) |t_m|^2 over open channels m <= n1.
struct ChannelProbabilities {
    double k = 0.0;
    int n1 = 0;
    std::vector<double> PR;
    std::vector<double> PT;
    double flux_defect = 0.0;  // |sum (PR + PT) - 1|
};

ChannelProbabilities probabilities(const TraceSolution& sol, const ChannelData& chan);
ChannelProbabilities probabilities(const TraceSolution& sol);

struct ScanOptions {
    Geometry geom{1.0};
    int n0 = 1;
    double k_min = 0.0;  // absolute units
    double k_max = 0.0;
    int steps = 2;       // number of grid points, k_min and k_max included
    int N = 200;
    int jobs = 1;
    // Grid points closer than this to a threshold are skipped; <= 0 means half a step.
    double skip_margin = 0.0;
    SolverOptions solver{};
};

struct ScanRow {
    double k = 0.0;  // absolute
    int n1 = 0;
    std::vector<double> PR;
    std::vector<double> PT;
    double flux_defect = 0.0;
    double cond = 0.0;
    bool near_threshold = false;  // within one grid step of a threshold
    bool ok = true;
    std::string error;
};

struct ScanTable {
    Geometry geom{1.0};
    int n0 = 1;
    int N = 0;
    std::vector<ScanRow> rows;       // increasing k
    std::vector<double> skipped_k;   // grid points dropped by the threshold margin
    std::vector<double> thresholds;  // threshold momenta inside [k_min, k_max]

    int max_channels() const;
    std::size_t failed_rows() const;
};

// Each row is an independent solve; failures are recorded on the row and the
// scan carries on.
ScanTable scan(const ScanOptions& opts);

}  // namespace dnscatter
