#include "dnscatter/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dnscatter/errors.hpp"
#include "dnscatter/parallel.hpp"

namespace dnscatter {

double to_absolute(double k, MomentumUnits units, const Geometry& geom) {
    return units == MomentumUnits::Absolute ? k : k * geom.half_pi_over_d();
}

double from_absolute(double k, MomentumUnits units, const Geometry& geom) {
    return units == MomentumUnits::Absolute ? k : k / geom.half_pi_over_d();
}

ChannelProbabilities probabilities(const TraceSolution& sol, const ChannelData& chan) {
    ChannelProbabilities out;
    out.k = sol.cfg.k;
    out.n1 = chan.n1;
    if (sol.r.size() < chan.n1 || sol.t.size() < chan.n1) {
        throw InvalidArgument("solution has fewer coefficients than open channels");
    }
    double total = 0.0;
    for (int m = 1; m <= chan.n1; ++m) {
        const double w = chan.k_channel(m) / sol.cfg.k;
        out.PR.push_back(w * std::norm(sol.r(m - 1)));
        out.PT.push_back(w * std::norm(sol.t(m - 1)));
        total += out.PR.back() + out.PT.back();
    }
    out.flux_defect = std::abs(total - 1.0);
    return out;
}

ChannelProbabilities probabilities(const TraceSolution& sol) {
    return probabilities(sol, channels(sol.cfg, std::max(sol.N, sol.n1) + 1));
}

int ScanTable::max_channels() const {
    int m = 0;
    for (const auto& row : rows) {
        if (row.ok) m = std::max(m, row.n1);
    }
    return m;
}

std::size_t ScanTable::failed_rows() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return !r.ok; }));
}

ScanTable scan(const ScanOptions& opts) {
    if (!(opts.k_min > 0.0) || !(opts.k_max > opts.k_min) || !std::isfinite(opts.k_max)) {
        throw InvalidArgument("scan range must satisfy 0 < k_min < k_max");
    }
    if (opts.steps < 2) throw InvalidArgument("scan needs steps >= 2");
    if (opts.N < 1) throw InvalidArgument("scan needs N >= 1");

    const double step = (opts.k_max - opts.k_min) / (opts.steps - 1);
    const double skip = opts.skip_margin > 0.0 ? opts.skip_margin : 0.5 * step;

    ScanTable table;
    table.geom = opts.geom;
    table.n0 = opts.n0;
    table.N = opts.N;
    {
        const double base = mu(opts.n0, opts.geom);
        for (int n = opts.n0 + 1;; ++n) {
            const double th = std::sqrt(mu(n, opts.geom) - base);
            if (th > opts.k_max + skip) break;
            if (th >= opts.k_min - skip) table.thresholds.push_back(th);
        }
    }

    std::vector<double> ks;
    for (int i = 0; i < opts.steps; ++i) {
        const double k = i + 1 == opts.steps ? opts.k_max : opts.k_min + i * step;
        if (threshold_distance(k, opts.n0, opts.geom) < skip) {
            table.skipped_k.push_back(k);
        } else {
            ks.push_back(k);
        }
    }

    table.rows.resize(ks.size());
    parallel_for(ks.size(), opts.jobs, [&](std::size_t i) {
        ScanRow& row = table.rows[i];
        row.k = ks[i];
        row.near_threshold = threshold_distance(ks[i], opts.n0, opts.geom) < step;
        try {
            const ScatteringConfig cfg(opts.geom, opts.n0, ks[i]);
            const TraceSolution sol = solve_matching(cfg, opts.N, opts.solver);
            const ChannelProbabilities p = probabilities(sol);
            row.n1 = p.n1;
            row.PR = p.PR;
            row.PT = p.PT;
            row.flux_defect = p.flux_defect;
            row.cond = sol.cond;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    });
    return table;
}

}  // namespace dnscatter
