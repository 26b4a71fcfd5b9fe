#include "dnscatter/wavepacket.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "dnscatter/errors.hpp"
#include "dnscatter/parallel.hpp"

namespace dnscatter {

namespace {

constexpr double kPi = std::numbers::pi;
using cvec = std::vector<cplx>;

// Uniform quadratic B-spline on [0, 3].
double bspline2(double s) {
    if (s <= 0.0 || s >= 3.0) return 0.0;
    if (s < 1.0) return 0.5 * s * s;
    if (s < 2.0) return 0.5 * (-2.0 * s * s + 6.0 * s - 3.0);
    return 0.5 * (3.0 - s) * (3.0 - s);
}

// Gauss-Legendre rule on [-1, 1] from the Jacobi matrix eigenproblem.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(static_cast<std::size_t>(n));
    w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        w[static_cast<std::size_t>(i)] = 2.0 * v * v;
    }
}

// A(x_j) = sum_q v_q exp(i s K_q x_j) on x_j = x0 + j h, j = 0..M. Phasors are
// advanced by multiplication and re-seeded every 256 points.
cvec open_wave(const Eigen::VectorXcd& v, const std::vector<double>& K, double s, double x0,
               double h, int M) {
    cvec out(static_cast<std::size_t>(M + 1), cplx(0.0, 0.0));
    const std::size_t Q = K.size();
    for (std::size_t q = 0; q < Q; ++q) {
        const double kq = s * K[q];
        const cplx step = std::polar(1.0, kq * h);
        cplx cur;
        for (int j = 0; j <= M; ++j) {
            if (j % 256 == 0) cur = std::polar(1.0, kq * (x0 + j * h));
            out[static_cast<std::size_t>(j)] += v(static_cast<Eigen::Index>(q)) * cur;
            cur *= step;
        }
    }
    return out;
}

// Composite Simpson of |A|^2 over samples j0..j1 (j1 - j0 even) with spacing h.
double simpson_abs2(const cvec& a, double h, int j0, int j1) {
    if (j1 <= j0) return 0.0;
    double s = std::norm(a[static_cast<std::size_t>(j0)]) + std::norm(a[static_cast<std::size_t>(j1)]);
    for (int j = j0 + 1; j < j1; ++j) {
        s += (j - j0) % 2 == 1 ? 4.0 * std::norm(a[static_cast<std::size_t>(j)])
                               : 2.0 * std::norm(a[static_cast<std::size_t>(j)]);
    }
    return s * h / 3.0;
}

double simpson_abs2(const cvec& a, double h) {
    return simpson_abs2(a, h, 0, static_cast<int>(a.size()) - 1);
}

// Simpson of conj(a) b.
cplx simpson_inner(const cvec& a, const cvec& b, double h) {
    const int M = static_cast<int>(a.size()) - 1;
    cplx s = std::conj(a[0]) * b[0] + std::conj(a[static_cast<std::size_t>(M)]) * b[static_cast<std::size_t>(M)];
    for (int j = 1; j < M; ++j) {
        s += (j % 2 == 1 ? 4.0 : 2.0) * std::conj(a[static_cast<std::size_t>(j)]) * b[static_cast<std::size_t>(j)];
    }
    return s * (h / 3.0);
}

// int_0^inf |sum_q v_q e^{-kappa_q x}|^2 dx
double closed_mode_norm2(const Eigen::VectorXcd& v, const std::vector<double>& kap) {
    const std::size_t Q = kap.size();
    double s = 0.0;
    for (std::size_t q = 0; q < Q; ++q) {
        const cplx vq = std::conj(v(static_cast<Eigen::Index>(q)));
        s += std::norm(v(static_cast<Eigen::Index>(q))) / (2.0 * kap[q]);
        for (std::size_t p = q + 1; p < Q; ++p) {
            s += 2.0 * (vq * v(static_cast<Eigen::Index>(p))).real() / (kap[q] + kap[p]);
        }
    }
    return s;
}

}  // namespace

// ---------------------------------------------------------------- envelope

Envelope::Envelope(double alpha, double beta, Shape shape)
    : alpha_(alpha), beta_(beta), shape_(shape) {
    if (!(alpha > 0.0) || !(beta > alpha) || !std::isfinite(beta)) {
        throw InvalidArgument("envelope window must satisfy 0 < alpha < beta");
    }
    double l2 = 0.0;
    const std::vector<double> bp = breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        l2 += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [this](double k) { return shape_value(k) * shape_value(k); }, bp[i], bp[i + 1], 15,
            1e-14);
    }
    scale_ = 1.0 / std::sqrt(2.0 * kPi * l2);
}

double Envelope::shape_value(double k) const {
    if (k <= alpha_ || k >= beta_) return 0.0;
    if (shape_ == Shape::QuadraticSpline) return bspline2(3.0 * (k - alpha_) / (beta_ - alpha_));
    const double s = (2.0 * k - alpha_ - beta_) / (beta_ - alpha_);
    return std::exp(-1.0 / (1.0 - s * s));
}

double Envelope::operator()(double k) const { return scale_ * shape_value(k); }

std::vector<double> Envelope::breakpoints() const {
    const double w = beta_ - alpha_;
    if (shape_ == Shape::QuadraticSpline) return {alpha_, alpha_ + w / 3.0, alpha_ + 2.0 * w / 3.0, beta_};
    // The bump is smooth, but its flat edges resolve poorly with one panel.
    return {alpha_, alpha_ + w / 4.0, alpha_ + w / 2.0, alpha_ + 3.0 * w / 4.0, beta_};
}

const Envelope& validate_window(const Envelope& env, int n0, const Geometry& geom) {
    if (n0 < 1) throw InvalidArgument("incident mode n0 must be >= 1");
    const double base = mu(n0, geom);
    for (int n = n0 + 1;; ++n) {
        const double th = std::sqrt(mu(n, geom) - base);
        if (th > env.beta()) break;
        if (th >= env.alpha()) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "window [" << env.alpha() << ", " << env.beta() << "] contains the threshold "
                << th << " (n=" << n << ")";
            throw WindowViolation(msg.str(), th);
        }
    }
    return env;
}

double time_unit(const Geometry& geom) {
    const double q = geom.half_pi_over_d();
    return 1.0 / (q * q);
}

DecayFit decay_fit(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 4) throw InvalidArgument("decay_fit needs at least 4 samples");
    const bool positive = samples.front().first > 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> lx, ly;
    for (const auto& [t, dist] : samples) {
        if (t == 0.0 || (t > 0.0) != positive) {
            throw InvalidArgument("decay_fit samples must share one sign of t and be nonzero");
        }
        if (!(dist > std::numeric_limits<double>::min()) || !std::isfinite(dist)) {
            throw InvalidArgument("decay_fit: degenerate fit, distance at the numerical floor");
        }
        lx.push_back(std::log(std::abs(t)));
        ly.push_back(std::log(dist));
    }
    const double n = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double den = n * sxx - sx * sx;
    if (!(std::abs(den) > 0.0)) throw InvalidArgument("decay_fit: all times coincide");
    DecayFit fit;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double mean = sy / n;
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double pred = fit.intercept + fit.slope * lx[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - mean) * (ly[i] - mean);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

// ---------------------------------------------------------------- model

struct PacketModel::Sides {
    double X = 0.0;
    double h = 0.0;
    int M = 0;            // left grid -X + j h, right grid j h, j = 0..M
    cvec inc_left;        // incident packet amplitude on the left grid
    cvec inc_right;       // ... and on the right grid (psi^- continued)
    std::vector<cvec> refl;   // open reflected channel l on the left grid
    std::vector<cvec> trans;  // open transmitted channel l on the right grid
    double boundary_mass = 0.0;
};

PacketModel::PacketModel(const PacketSetup& setup) : setup_(setup) {
    const Envelope& env = setup_.envelope;
    validate_window(env, setup_.n0, setup_.geom);
    if (setup_.quad.nodes_per_panel < 2) throw InvalidArgument("need >= 2 nodes per panel");
    n1_ = max_excitable_mode(ScatteringConfig(setup_.geom, setup_.n0, env.alpha()));
    if (setup_.N <= n1_) {
        throw InvalidArgument("N=" + std::to_string(setup_.N) + " must exceed n1=" +
                              std::to_string(n1_));
    }
    Nt_ = setup_.solver.nt > 0 ? setup_.solver.nt : 2 * setup_.N;

    std::vector<double> gx, gw;
    gauss_legendre(setup_.quad.nodes_per_panel, gx, gw);
    const std::vector<double> bp = env.breakpoints();
    for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
        const double mid = 0.5 * (bp[p] + bp[p + 1]);
        const double half = 0.5 * (bp[p + 1] - bp[p]);
        for (std::size_t i = 0; i < gx.size(); ++i) {
            const double k = mid + half * gx[i];
            k_.push_back(k);
            wa_.push_back(half * gw[i] * env(k));
        }
    }

    node_.resize(k_.size());
    SolverOptions so = setup_.solver;
    so.nt = Nt_;
    so.incidence = Incidence::Left;
    parallel_for(k_.size(), setup_.jobs, [&](std::size_t q) {
        const ScatteringConfig cfg(setup_.geom, setup_.n0, k_[q]);
        const TraceSolution sol = solve_matching(cfg, setup_.N, so);
        const ChannelData ch = channels(cfg, setup_.N);
        Node& nd = node_[q];
        nd.k = k_[q];
        nd.E = ch.E;
        nd.k_open = ch.k_prop;
        for (int n = n1_ + 1; n <= Nt_; ++n) nd.kappa.push_back(std::sqrt(mu(n, setup_.geom) - ch.E));
        nd.r = sol.r;
        nd.t = sol.t;
    });
}

Eigen::VectorXcd PacketModel::phases(double t) const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(k_.size()));
    for (std::size_t q = 0; q < k_.size(); ++q) {
        v(static_cast<Eigen::Index>(q)) = wa_[q] * std::polar(1.0, -node_[q].E * t);
    }
    return v;
}

double PacketModel::dx_of(const GridSpec& g) const {
    return g.dx > 0.0 ? g.dx : setup_.geom.d / 64.0;
}

double PacketModel::default_extent(double t) const {
    // fastest open channel: l = 1 at the top of the window
    const double E_top = mu(setup_.n0, setup_.geom) + setup_.envelope.beta() * setup_.envelope.beta();
    const double vmax = 2.0 * std::sqrt(E_top - mu(1, setup_.geom));
    const double width = setup_.envelope.beta() - setup_.envelope.alpha();
    return vmax * std::abs(t) + std::max(20.0 * setup_.geom.d, 60.0 / width);
}

PacketModel::Sides PacketModel::open_amplitudes(double t, double X, double dx) const {
    Sides s;
    s.M = std::max(2, static_cast<int>(std::ceil(X / dx)));
    if (s.M % 2 == 1) ++s.M;
    s.h = X / s.M;
    s.X = X;
    const Eigen::VectorXcd ph = phases(t);
    const std::size_t Q = k_.size();

    s.inc_left = open_wave(ph, k_, 1.0, -X, s.h, s.M);
    s.inc_right = open_wave(ph, k_, 1.0, 0.0, s.h, s.M);
    for (int l = 1; l <= n1_; ++l) {
        Eigen::VectorXcd vr(static_cast<Eigen::Index>(Q));
        Eigen::VectorXcd vt(static_cast<Eigen::Index>(Q));
        std::vector<double> kl(Q);
        for (std::size_t q = 0; q < Q; ++q) {
            const auto qi = static_cast<Eigen::Index>(q);
            vr(qi) = ph(qi) * node_[q].r(l - 1);
            vt(qi) = ph(qi) * node_[q].t(l - 1);
            kl[q] = node_[q].k_open[static_cast<std::size_t>(l - 1)];
        }
        s.refl.push_back(open_wave(vr, kl, -1.0, -X, s.h, s.M));
        s.trans.push_back(open_wave(vt, kl, 1.0, 0.0, s.h, s.M));
    }

    // Outer tenth of each half-grid, rounded to an even number of intervals.
    int strip = std::max(2, s.M / 10);
    if (strip % 2 == 1) ++strip;
    double outer = 0.0, total = 0.0;
    auto acc_left = [&](const cvec& a) {
        outer += simpson_abs2(a, s.h, 0, strip);
        total += simpson_abs2(a, s.h);
    };
    auto acc_right = [&](const cvec& a) {
        outer += simpson_abs2(a, s.h, s.M - strip, s.M);
        total += simpson_abs2(a, s.h);
    };
    acc_left(s.inc_left);
    acc_right(s.inc_right);
    for (const cvec& a : s.refl) acc_left(a);
    for (const cvec& a : s.trans) acc_right(a);
    s.boundary_mass = total > 0.0 ? outer / total : 0.0;
    return s;
}

PacketModel::Sides PacketModel::open_amplitudes_auto(double t, const GridSpec& grid) const {
    double X = grid.X > 0.0 ? grid.X : default_extent(t);
    const double dx = dx_of(grid);
    constexpr int max_expansions = 6;
    for (int e = 0; e <= max_expansions; ++e) {
        Sides s = open_amplitudes(t, X, dx);
        if (s.boundary_mass < 1e-6) return s;
        X *= 2.0;
    }
    std::ostringstream msg;
    msg << "x-grid still carries boundary mass above 1e-6 at X=" << X / 2.0 << " (t=" << t << ")";
    throw GridTooSmall(msg.str());
}

double PacketModel::closed_left(const Eigen::VectorXcd& ph) const {
    const std::size_t Q = k_.size();
    double s = 0.0;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(Q));
    std::vector<double> kap(Q);
    for (int n = n1_ + 1; n <= setup_.N; ++n) {
        for (std::size_t q = 0; q < Q; ++q) {
            v(static_cast<Eigen::Index>(q)) = ph(static_cast<Eigen::Index>(q)) * node_[q].r(n - 1);
            kap[q] = node_[q].kappa[static_cast<std::size_t>(n - n1_ - 1)];
        }
        s += closed_mode_norm2(v, kap);
    }
    return s;
}

double PacketModel::closed_right(const Eigen::VectorXcd& ph) const {
    const std::size_t Q = k_.size();
    double s = 0.0;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(Q));
    std::vector<double> kap(Q);
    for (int m = n1_ + 1; m <= Nt_; ++m) {
        for (std::size_t q = 0; q < Q; ++q) {
            v(static_cast<Eigen::Index>(q)) = ph(static_cast<Eigen::Index>(q)) * node_[q].t(m - 1);
            kap[q] = node_[q].kappa[static_cast<std::size_t>(m - n1_ - 1)];
        }
        s += closed_mode_norm2(v, kap);
    }
    return s;
}

double PacketModel::total_norm(double t, const GridSpec& grid) const {
    const Sides s = open_amplitudes_auto(t, grid);
    const Eigen::VectorXcd ph = phases(t);
    double n2 = closed_left(ph) + closed_right(ph);
    for (int l = 1; l <= n1_; ++l) {
        const auto li = static_cast<std::size_t>(l - 1);
        if (l == setup_.n0) {
            cvec sum = s.refl[li];
            for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += s.inc_left[j];
            n2 += simpson_abs2(sum, s.h);
        } else {
            n2 += simpson_abs2(s.refl[li], s.h);
        }
        n2 += simpson_abs2(s.trans[li], s.h);
    }
    return std::sqrt(n2);
}

double PacketModel::evanescent_norm(double t) const {
    const Eigen::VectorXcd ph = phases(t);
    return std::sqrt(closed_left(ph) + closed_right(ph));
}

DistanceResult PacketModel::convergence_distance(double t, const GridSpec& grid) const {
    const Sides s = open_amplitudes_auto(t, grid);
    const Eigen::VectorXcd ph = phases(t);
    double d2 = closed_left(ph) + closed_right(ph);

    if (t >= 0.0) {
        // psi - psi^+ = psi^- + closed parts on x < 0, closed parts on x > 0
        d2 += simpson_abs2(s.inc_left, s.h);
    } else {
        // x < 0: open reflected channels; x > 0: full right field minus psi^-
        for (const cvec& a : s.refl) d2 += simpson_abs2(a, s.h);
        for (const cvec& a : s.trans) d2 += simpson_abs2(a, s.h);
        d2 += simpson_abs2(s.inc_right, s.h);
        // -2 Re <u, g chi^-_{n0}> = -2 Re sum_m O_{n0 m} int conj(u_m) g dx
        double cross = 0.0;
        for (int l = 1; l <= n1_; ++l) {
            cross += overlap(setup_.n0, l) *
                     simpson_inner(s.trans[static_cast<std::size_t>(l - 1)], s.inc_right, s.h).real();
        }
        const std::size_t Q = k_.size();
        for (int m = n1_ + 1; m <= Nt_; ++m) {
            cplx acc = 0.0;
            for (std::size_t q = 0; q < Q; ++q) {
                const cplx u = std::conj(ph(static_cast<Eigen::Index>(q)) * node_[q].t(m - 1));
                const double kap = node_[q].kappa[static_cast<std::size_t>(m - n1_ - 1)];
                for (std::size_t p = 0; p < Q; ++p) {
                    acc += u * ph(static_cast<Eigen::Index>(p)) / cplx(kap, -k_[p]);
                }
            }
            cross += overlap(setup_.n0, m) * acc.real();
        }
        d2 -= 2.0 * cross;
    }
    DistanceResult out;
    out.distance = std::sqrt(std::max(0.0, d2));
    out.X = s.X;
    out.boundary_mass = s.boundary_mass;
    return out;
}

double PacketModel::transmitted_centroid(double t, const GridSpec& grid) const {
    const Sides s = open_amplitudes_auto(t, grid);
    double num = 0.0, den = 0.0;
    for (const cvec& a : s.trans) {
        for (int j = 0; j <= s.M; ++j) {
            const double w = (j == 0 || j == s.M) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            const double m = w * std::norm(a[static_cast<std::size_t>(j)]);
            num += m * j * s.h;
            den += m;
        }
    }
    if (!(den > 0.0)) throw InvalidArgument("no transmitted mass on the grid");
    return num / den;
}

FieldSnapshot PacketModel::sample(double t, const GridSpec& grid, Part part) const {
    const double X = grid.X > 0.0 ? grid.X : default_extent(t);
    const double dx_req = dx_of(grid);
    const double dy_req = grid.dy > 0.0 ? grid.dy : setup_.geom.d / 64.0;
    const double d = setup_.geom.d;

    FieldSnapshot snap;
    snap.t = t;
    const int mx = std::max(2, static_cast<int>(std::ceil(2.0 * X / dx_req)));
    snap.nx = mx + 1;
    snap.x_min = -X;
    snap.dx = 2.0 * X / mx;
    const int my = std::max(1, static_cast<int>(std::ceil(d / dy_req)));
    snap.ny = my + 1;
    snap.dy = d / my;
    snap.values.assign(static_cast<std::size_t>(snap.nx) * static_cast<std::size_t>(snap.ny),
                       cplx(0.0, 0.0));

    const int left_modes = part == Part::Full ? setup_.N : n1_;
    const int right_modes = part == Part::Full ? Nt_ : n1_;
    const int max_modes = std::max(left_modes, right_modes);
    std::vector<double> chi_m(static_cast<std::size_t>(max_modes * snap.ny));
    std::vector<double> chi_p(chi_m.size());
    for (int n = 1; n <= max_modes; ++n) {
        for (int j = 0; j < snap.ny; ++j) {
            const double y = std::min(d, j * snap.dy);
            chi_m[static_cast<std::size_t>((n - 1) * snap.ny + j)] = chi(ModeBasis::Sine, n, y, setup_.geom);
            chi_p[static_cast<std::size_t>((n - 1) * snap.ny + j)] = chi(ModeBasis::Cosine, n, y, setup_.geom);
        }
    }

    const Eigen::VectorXcd ph = phases(t);
    const std::size_t Q = k_.size();
    parallel_for(static_cast<std::size_t>(snap.nx), setup_.jobs, [&](std::size_t ix) {
        const double x = snap.x(static_cast<int>(ix));
        cplx* row = snap.values.data() + ix * static_cast<std::size_t>(snap.ny);
        auto add_mode = [&](const std::vector<double>& table, int n, cplx amp) {
            const double* c = table.data() + static_cast<std::size_t>((n - 1) * snap.ny);
            for (int j = 0; j < snap.ny; ++j) row[j] += amp * c[j];
        };

        if (part != Part::Outgoing && (part == Part::Incoming || x < 0.0)) {
            cplx g = 0.0;
            for (std::size_t q = 0; q < Q; ++q) g += ph(static_cast<Eigen::Index>(q)) * std::polar(1.0, k_[q] * x);
            add_mode(chi_m, setup_.n0, g);
        }
        if (part == Part::Incoming) return;

        if (x < 0.0) {
            for (int n = 1; n <= left_modes; ++n) {
                cplx amp = 0.0;
                for (std::size_t q = 0; q < Q; ++q) {
                    const cplx v = ph(static_cast<Eigen::Index>(q)) * node_[q].r(n - 1);
                    if (n <= n1_) {
                        amp += v * std::polar(1.0, -node_[q].k_open[static_cast<std::size_t>(n - 1)] * x);
                    } else {
                        const double kap = node_[q].kappa[static_cast<std::size_t>(n - n1_ - 1)];
                        if (kap * -x < 745.0) amp += v * std::exp(kap * x);
                    }
                }
                if (amp != cplx(0.0, 0.0)) add_mode(chi_m, n, amp);
            }
        } else {
            for (int m = 1; m <= right_modes; ++m) {
                cplx amp = 0.0;
                for (std::size_t q = 0; q < Q; ++q) {
                    const cplx v = ph(static_cast<Eigen::Index>(q)) * node_[q].t(m - 1);
                    if (m <= n1_) {
                        amp += v * std::polar(1.0, node_[q].k_open[static_cast<std::size_t>(m - 1)] * x);
                    } else {
                        const double kap = node_[q].kappa[static_cast<std::size_t>(m - n1_ - 1)];
                        if (kap * x < 745.0) amp += v * std::exp(-kap * x);
                    }
                }
                if (amp != cplx(0.0, 0.0)) add_mode(chi_p, m, amp);
            }
        }
    });
    return snap;
}

FieldSnapshot PacketModel::evolve(double t, const GridSpec& grid) const {
    return sample(t, grid, Part::Full);
}

AsymptoticPair PacketModel::asymptotes(double t, const GridSpec& grid) const {
    return {sample(t, grid, Part::Incoming), sample(t, grid, Part::Outgoing)};
}

double quadrature_self_check(const PacketSetup& setup, double t, double tol) {
    const PacketModel coarse(setup);
    PacketSetup fine_setup = setup;
    fine_setup.quad.nodes_per_panel *= 2;
    const PacketModel fine(fine_setup);
    const DistanceResult a = coarse.convergence_distance(t);
    GridSpec g;
    g.X = a.X;
    const DistanceResult b = fine.convergence_distance(t, g);
    const double rel = std::abs(a.distance - b.distance) / std::max(b.distance, 1e-300);
    if (rel > tol) {
        std::ostringstream msg;
        msg << "distance at t=" << t << " changes by " << rel << " (relative) when the nodes per "
            << "panel double from " << setup.quad.nodes_per_panel;
        throw QuadratureUnderResolved(msg.str());
    }
    return rel;
}

}  // namespace dnscatter
