#pragma once

#include <vector>

#include "dnscatter/modes.hpp"

namespace dnscatter {

// Incident transversal mode n0 with longitudinal momentum k (absolute units,
// 1/length). Energy E = mu_{n0} + k^2.
struct ScatteringConfig {
    Geometry geom{1.0};
    int n0 = 1;
    double k = 1.0;

    ScatteringConfig() = default;
    ScatteringConfig(Geometry g, int incident_mode, double momentum);
};

// Channel bookkeeping at fixed energy.
//   k_prop[l-1] = k_l      = sqrt(E - mu_l),  l = 1..n1   (propagating)
//   kappa(n)    = kappa_n  = sqrt(mu_n - E),  n1 < n <= nmax (evanescent)
struct ChannelData {
    double E = 0.0;
    int n1 = 0;
    int nmax = 0;
    std::vector<double> k_prop;
    std::vector<double> kappa_evan;  // entry i is kappa_{n1 + 1 + i}

    double kappa(int n) const { return kappa_evan.at(static_cast<std::size_t>(n - n1 - 1)); }
    double k_channel(int l) const { return k_prop.at(static_cast<std::size_t>(l - 1)); }
};

// Default threshold exclusion margin: 1e-6 in units of pi/(2d).
double default_threshold_margin(const Geometry& geom);

double energy(const ScatteringConfig& cfg);

// Integer part of 1/2 + sqrt((n0 - 1/2)^2 + d^2 k^2 / pi^2).
int max_excitable_mode(const ScatteringConfig& cfg);

// Throws ThresholdDegenerate when E coincides with some mu_n to a
// machine-scale relative margin, InvalidArgument when nmax <= n1.
ChannelData channels(const ScatteringConfig& cfg, int nmax);

// Momenta sqrt(mu_n - mu_{n0}) for n0 < n <= nmax, increasing.
std::vector<double> thresholds(int n0, const Geometry& geom, int nmax);

// Distance from k to the nearest threshold momentum.
double threshold_distance(double k, int n0, const Geometry& geom);

bool is_near_threshold(double k, int n0, const Geometry& geom, double margin);

// Throws ThresholdDegenerate naming the offending threshold when
// is_near_threshold(cfg.k, ...) holds.
void require_off_threshold(const ScatteringConfig& cfg, double margin);

}  // namespace dnscatter
