#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dnscatter/observables.hpp"
#include "dnscatter/wavepacket.hpp"

namespace dnscatter {

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

// Header k,n1,PR1..PRm,PT1..PTm,flux_defect,cond; channels a row does not have
// are left empty. Failed rows are omitted. k is written in `units`.
void write_scan_csv(std::ostream& os, const ScanTable& table, MomentumUnits units);

// Polylines per channel, reflection dashed and transmission solid, dotted
// verticals at thresholds. k axis in units of pi/2d. Output depends only on
// the table.
void write_scan_svg(std::ostream& os, const ScanTable& table, const std::string& title);

// n,mu,O1..ON: eigenvalue mu_n and row n of the overlap block O_N.
void write_modes_csv(std::ostream& os, const Geometry& geom, int N);

// t,distance with t in units of (pi/2d)^{-2}.
void write_decay_csv(std::ostream& os, const std::vector<std::pair<double, double>>& samples);

// x,y,re,im
void write_snapshot_csv(std::ostream& os, const FieldSnapshot& snap);

}  // namespace dnscatter
