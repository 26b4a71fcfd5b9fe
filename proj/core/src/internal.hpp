#pragma once

// Helpers shared by the solver translation units. Not installed.

#include <Eigen/Dense>

#include "dnscatter/matcher.hpp"

namespace dnscatter::detail {

double resolve_margin(const ScatteringConfig& cfg, const SolverOptions& opts);

// Validates N >= n1 and the threshold margin; the returned data reaches mode N + 1.
ChannelData checked_channels(const ScatteringConfig& cfg, int N, const SolverOptions& opts);
// Same, additionally requiring N >= 2 n1 so the closed-channel block can be invertible.
ChannelData checked_closed_channels(const ScatteringConfig& cfg, int N, const SolverOptions& opts);

int resolve_nt(int N, const SolverOptions& opts);

// Sine coefficients of the incident profile g: e_{n0} for left incidence,
// column n0 of O for right incidence (chi^+_{n0} seen from the sine side).
Eigen::VectorXd incident_profile(int n0, Incidence inc, int rows);

// Lambda + O Lambda O^T for a complex diagonal, via two real products.
Eigen::MatrixXcd galerkin_matrix(const Eigen::MatrixXd& O, const Eigen::VectorXcd& lambda);

// Fills r, t, residuals from the sine coefficients c.
TraceSolution build_solution(const ScatteringConfig& cfg, int N, int Nt, int n1,
                             Incidence inc, Eigen::VectorXcd c, double cond);

}  // namespace dnscatter::detail
