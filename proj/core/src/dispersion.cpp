#include "dnscatter/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "dnscatter/errors.hpp"

namespace dnscatter {

ScatteringConfig::ScatteringConfig(Geometry g, int incident_mode, double momentum)
    : geom(g), n0(incident_mode), k(momentum) {
    if (n0 < 1) {
        throw InvalidArgument("incident mode n0 must be >= 1, got " + std::to_string(n0));
    }
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw InvalidArgument("momentum k must be finite and > 0, got " + std::to_string(k));
    }
}

double default_threshold_margin(const Geometry& geom) { return 1e-6 * geom.half_pi_over_d(); }

double energy(const ScatteringConfig& cfg) { return mu(cfg.n0, cfg.geom) + cfg.k * cfg.k; }

int max_excitable_mode(const ScatteringConfig& cfg) {
    const double a = cfg.n0 - 0.5;
    const double b = cfg.geom.d * cfg.k / std::numbers::pi;
    return static_cast<int>(std::floor(0.5 + std::sqrt(a * a + b * b)));
}

ChannelData channels(const ScatteringConfig& cfg, int nmax) {
    ChannelData out;
    out.E = energy(cfg);
    out.n1 = max_excitable_mode(cfg);

    // The integer-part formula and the direct comparison must agree; near a
    // threshold either can round the wrong way, which is the degenerate case.
    const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * out.E;
    for (int n = std::max(1, out.n1 - 1); n <= out.n1 + 1; ++n) {
        if (std::abs(out.E - mu(n, cfg.geom)) <= tiny) {
            std::ostringstream msg;
            msg << "energy E=" << out.E << " coincides with mu_" << n
                << " (threshold k=" << std::sqrt(std::max(0.0, mu(n, cfg.geom) - mu(cfg.n0, cfg.geom)))
                << ")";
            throw ThresholdDegenerate(msg.str(),
                                      std::sqrt(std::max(0.0, mu(n, cfg.geom) - mu(cfg.n0, cfg.geom))));
        }
    }
    while (out.n1 > 0 && !(mu(out.n1, cfg.geom) < out.E)) --out.n1;
    while (mu(out.n1 + 1, cfg.geom) < out.E) ++out.n1;
    if (nmax <= out.n1) {
        throw InvalidArgument("mode cutoff " + std::to_string(nmax) +
                              " must exceed the number of open channels n1=" +
                              std::to_string(out.n1));
    }
    out.nmax = nmax;
    out.k_prop.reserve(static_cast<std::size_t>(out.n1));
    for (int l = 1; l <= out.n1; ++l) {
        out.k_prop.push_back(std::sqrt(out.E - mu(l, cfg.geom)));
    }
    // k_{n0} = k exactly; the subtraction above loses the last bits.
    out.k_prop[static_cast<std::size_t>(cfg.n0 - 1)] = cfg.k;
    out.kappa_evan.reserve(static_cast<std::size_t>(nmax - out.n1));
    for (int n = out.n1 + 1; n <= nmax; ++n) {
        out.kappa_evan.push_back(std::sqrt(mu(n, cfg.geom) - out.E));
    }
    return out;
}

std::vector<double> thresholds(int n0, const Geometry& geom, int nmax) {
    if (n0 < 1) throw InvalidArgument("incident mode n0 must be >= 1");
    if (nmax < n0 + 1) {
        throw InvalidArgument("threshold cutoff nmax must be >= n0 + 1");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(nmax - n0));
    const double base = mu(n0, geom);
    for (int n = n0 + 1; n <= nmax; ++n) {
        out.push_back(std::sqrt(mu(n, geom) - base));
    }
    return out;
}

namespace {

// Nearest threshold momentum to k (always exists: the set is unbounded above).
double nearest_threshold(double k, int n0, const Geometry& geom) {
    const double base = mu(n0, geom);
    double best = std::numeric_limits<double>::infinity();
    for (int n = n0 + 1;; ++n) {
        const double th = std::sqrt(mu(n, geom) - base);
        if (std::abs(th - k) < std::abs(best - k)) best = th;
        if (th > k) break;
    }
    return best;
}

}  // namespace

double threshold_distance(double k, int n0, const Geometry& geom) {
    return std::abs(nearest_threshold(k, n0, geom) - k);
}

bool is_near_threshold(double k, int n0, const Geometry& geom, double margin) {
    if (!(margin > 0.0)) throw InvalidArgument("threshold margin must be > 0");
    return threshold_distance(k, n0, geom) < margin;
}

void require_off_threshold(const ScatteringConfig& cfg, double margin) {
    const double th = nearest_threshold(cfg.k, cfg.n0, cfg.geom);
    if (std::abs(th - cfg.k) < margin) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "k=" << cfg.k << " lies within " << margin << " of the channel threshold "
            << th << " (n0=" << cfg.n0 << ", d=" << cfg.geom.d << ")";
        throw ThresholdDegenerate(msg.str(), th);
    }
}

}  // namespace dnscatter
