#include "dnscatter_cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "dnscatter/errors.hpp"
#include "dnscatter/matcher.hpp"
#include "dnscatter/observables.hpp"
#include "dnscatter/report_writers.hpp"
#include "dnscatter/serialization.hpp"
#include "dnscatter/validation.hpp"
#include "dnscatter/wavepacket.hpp"

namespace dnscatter::cli {

namespace {

constexpr int kOk = 0;
constexpr int kChecksFailed = 1;
constexpr int kBadInput = 2;
constexpr int kSolverFailed = 3;

const std::map<std::string, MomentumUnits> kUnits{{"absolute", MomentumUnits::Absolute},
                                                  {"half-pi-over-d", MomentumUnits::HalfPiOverD}};

// Default outputs go to $DNSCATTER_OUTDIR when set, else the working directory.
std::filesystem::path output_path(const std::string& given, const char* default_name) {
    if (!given.empty()) return given;
    const char* dir = std::getenv("DNSCATTER_OUTDIR");
    std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : std::filesystem::path(".");
    return base / default_name;
}

std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw InvalidArgument("cannot open output file " + p.string());
    f.precision(17);
    return f;
}

struct Common {
    double d = 1.0;
    int n0 = 1;
    std::string units = "half-pi-over-d";
    int jobs = 1;

    Geometry geom() const { return Geometry(d); }
    MomentumUnits unit() const { return kUnits.at(units); }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--d", c.d, "waveguide width")->capture_default_str();
    sub->add_option("--n0", c.n0, "incident transversal mode")->capture_default_str();
    sub->add_option("--units", c.units, "momentum units")
        ->check(CLI::IsMember({"absolute", "half-pi-over-d"}))
        ->capture_default_str();
}

// ------------------------------------------------------------------ solve

struct SolveArgs {
    Common c;
    double k = 0.0;
    int N = 200;
    int Nt = 0;
    double margin = 0.0;
    bool force = false;
    std::string incidence = "left";
    std::string out;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
    const Geometry g = a.c.geom();
    const ScatteringConfig cfg(g, a.c.n0, to_absolute(a.k, a.c.unit(), g));
    SolverOptions so;
    so.threshold_margin = a.margin > 0.0 ? to_absolute(a.margin, a.c.unit(), g) : 0.0;
    so.force = a.force;
    so.nt = a.Nt;
    so.incidence = a.incidence == "right" ? Incidence::Right : Incidence::Left;
    if (!so.force) require_off_threshold(cfg, so.threshold_margin > 0.0 ? so.threshold_margin
                                                                         : default_threshold_margin(g));
    const int n1 = channels(cfg, std::max(a.N, max_excitable_mode(cfg)) + 1).n1;
    if (a.N <= n1) {
        throw InvalidArgument("--N=" + std::to_string(a.N) + " must exceed the number of open channels n1=" +
                              std::to_string(n1));
    }
    const TraceSolution sol = solve_matching(cfg, a.N, so);
    const ChannelProbabilities p = probabilities(sol);

    const auto path = output_path(a.out, "solution.json");
    open_out(path) << to_json(sol) << '\n';

    out << std::setprecision(10);
    out << "k = " << from_absolute(cfg.k, a.c.unit(), g) << " (" << a.c.units << "), n1 = " << p.n1
        << ", N = " << sol.N << '\n';
    for (int m = 1; m <= p.n1; ++m) {
        out << "  channel " << m << ": PR = " << p.PR[static_cast<std::size_t>(m - 1)]
            << "  PT = " << p.PT[static_cast<std::size_t>(m - 1)] << '\n';
    }
    out << std::setprecision(3) << std::scientific;
    out << "flux_defect = " << p.flux_defect << "  cond = " << sol.cond
        << "  residual_cont = " << sol.residual_cont << "  residual_deriv = " << sol.residual_deriv
        << '\n';
    out << std::defaultfloat << "wrote " << path.string() << '\n';
    return kOk;
}

// ------------------------------------------------------------------ scan

struct ScanArgs {
    Common c;
    double k_min = 0.05;
    double k_max = 5.0;
    int steps = 200;
    int N = 200;
    std::string out;
    std::string svg;
    std::string title;
};

int cmd_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
    const Geometry g = a.c.geom();
    if (!(a.k_max > a.k_min) || !(a.k_min > 0.0)) {
        throw InvalidArgument("--k-min/--k-max: need 0 < k_min < k_max (got [" +
                              std::to_string(a.k_min) + ", " + std::to_string(a.k_max) + "])");
    }
    if (a.steps < 2) throw InvalidArgument("--steps must be >= 2");
    ScanOptions so;
    so.geom = g;
    so.n0 = a.c.n0;
    so.k_min = to_absolute(a.k_min, a.c.unit(), g);
    so.k_max = to_absolute(a.k_max, a.c.unit(), g);
    so.steps = a.steps;
    so.N = a.N;
    so.jobs = a.c.jobs;
    // Validate the template config before spending time on rows.
    (void)ScatteringConfig(g, a.c.n0, so.k_min);
    const ScanTable table = scan(so);

    const auto path = output_path(a.out, "scan.csv");
    {
        auto f = open_out(path);
        write_scan_csv(f, table, a.c.unit());
    }
    if (!a.svg.empty()) {
        auto f = open_out(a.svg);
        const std::string title =
            a.title.empty() ? "Reflection (dashed) and transmission, n0 = " + std::to_string(a.c.n0)
                            : a.title;
        write_scan_svg(f, table, title);
    }
    for (const ScanRow& r : table.rows) {
        if (!r.ok) err << "row k=" << from_absolute(r.k, a.c.unit(), g) << " failed: " << r.error << '\n';
    }
    double worst = 0.0;
    for (const ScanRow& r : table.rows) {
        if (r.ok) worst = std::max(worst, r.flux_defect);
    }
    out << table.rows.size() - table.failed_rows() << " rows, " << table.failed_rows() << " failed, "
        << table.skipped_k.size() << " skipped near thresholds; max flux_defect " << std::scientific
        << std::setprecision(3) << worst << std::defaultfloat << '\n';
    out << "wrote " << path.string() << (a.svg.empty() ? "" : " and " + a.svg) << '\n';
    if (!table.rows.empty() && table.failed_rows() == table.rows.size()) return kSolverFailed;
    if (table.rows.empty()) return kSolverFailed;
    return kOk;
}

// ------------------------------------------------------------------ wavepacket

struct PacketArgs {
    Common c;
    double alpha = 0.5;
    double beta = 1.0;
    std::string envelope = "bump";
    int N = 100;
    int nodes = 64;
    std::vector<double> times{10, 20, 40, 80};
    std::string branch = "both";
    bool check_quadrature = false;
    std::string out;
    std::string snapshot;
    double snapshot_time = 0.0;
};

int cmd_wavepacket(const PacketArgs& a, std::ostream& out) {
    const Geometry g = a.c.geom();
    for (double t : a.times) {
        if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("--times entries must be > 0");
    }
    PacketSetup s;
    s.geom = g;
    s.n0 = a.c.n0;
    const double lo = to_absolute(a.alpha, a.c.unit(), g);
    const double hi = to_absolute(a.beta, a.c.unit(), g);
    s.envelope = a.envelope == "bump" ? Envelope::bump(lo, hi) : Envelope::quadratic_spline(lo, hi);
    validate_window(s.envelope, s.n0, g);
    s.N = a.N;
    s.quad.nodes_per_panel = a.nodes;
    s.jobs = a.c.jobs;

    const double tu = time_unit(g);
    if (a.check_quadrature) {
        double tmax = 0.0;
        for (double t : a.times) tmax = std::max(tmax, t);
        const double rel = quadrature_self_check(s, tmax * tu, 1e-8);
        out << "quadrature self-check at t=" << tmax << ": relative change " << rel << '\n';
    }

    const PacketModel model(s);
    std::vector<std::pair<double, double>> rows, pos, neg;
    for (double sign : {-1.0, 1.0}) {
        if ((sign < 0 && a.branch == "plus") || (sign > 0 && a.branch == "minus")) continue;
        for (double t : a.times) {
            const DistanceResult d = model.convergence_distance(sign * t * tu);
            rows.emplace_back(sign * t, d.distance);
            (sign > 0 ? pos : neg).emplace_back(t, d.distance);
        }
    }
    const auto path = output_path(a.out, "decay.csv");
    {
        auto f = open_out(path);
        write_decay_csv(f, rows);
    }
    out << std::setprecision(4);
    for (const auto* branch : {&neg, &pos}) {
        if (branch->empty()) continue;
        const char* name = branch == &pos ? "t -> +inf" : "t -> -inf";
        if (branch->size() < 4) {
            out << name << ": " << branch->size() << " samples, need 4 for a fit\n";
            continue;
        }
        const DecayFit fit = decay_fit(*branch);
        out << name << ": slope " << fit.slope << "  (r2 " << fit.r2 << ")\n";
    }
    out << "norm at t=" << a.times.back() << ": " << std::setprecision(10)
        << model.total_norm(a.times.back() * tu) << '\n';
    if (!a.snapshot.empty()) {
        GridSpec grid;
        const FieldSnapshot snap = model.evolve(a.snapshot_time * tu, grid);
        auto f = open_out(a.snapshot);
        write_snapshot_csv(f, snap);
    }
    out << "wrote " << path.string() << '\n';
    return kOk;
}

// ------------------------------------------------------------------ validate / modes

struct ValidateArgs {
    std::uint64_t seed = ValidationOptions{}.seed;
    int N = 200;
    int configs = 20;
    bool json = false;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
    ValidationOptions vo;
    vo.seed = a.seed;
    vo.N = a.N;
    vo.configs = a.configs;
    const ValidationReport rep = run_validation(vo);
    out << (a.json ? rep.to_json() + "\n" : rep.to_text());
    return rep.all_passed() ? kOk : kChecksFailed;
}

struct ModesArgs {
    double d = 1.0;
    int N = 8;
    std::string out;
};

int cmd_modes(const ModesArgs& a, std::ostream& out) {
    if (a.N < 1) throw InvalidArgument("--N must be >= 1");
    const Geometry g(a.d);
    if (a.out.empty()) {
        write_modes_csv(out, g, a.N);
    } else {
        auto f = open_out(a.out);
        write_modes_csv(f, g, a.N);
    }
    return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mode-matching scattering in a waveguide whose Dirichlet and Neumann walls swap at x = 0"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "dnscatter 0.1.0");

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "solve one configuration, write the trace as JSON");
    add_common(solve, sa.c);
    solve->add_option("--k", sa.k, "longitudinal momentum")->required();
    solve->add_option("--N", sa.N, "sine modes in the Galerkin system")->capture_default_str();
    solve->add_option("--Nt", sa.Nt, "cosine modes kept for t (0: 2N)")->capture_default_str();
    solve->add_option("--margin", sa.margin, "threshold exclusion margin (0: 1e-6 pi/2d)");
    solve->add_flag("--force", sa.force, "solve inside the threshold margin");
    solve->add_option("--incidence", sa.incidence, "side of the incoming wave")
        ->check(CLI::IsMember({"left", "right"}))
        ->capture_default_str();
    solve->add_option("--out", sa.out, "solution file (default $DNSCATTER_OUTDIR/solution.json)");

    ScanArgs sc;
    auto* scan_cmd = app.add_subcommand("scan", "PR/PT over a uniform k grid, CSV and optional SVG");
    add_common(scan_cmd, sc.c);
    scan_cmd->add_option("--k-min", sc.k_min)->capture_default_str();
    scan_cmd->add_option("--k-max", sc.k_max)->capture_default_str();
    scan_cmd->add_option("--steps", sc.steps, "grid points")->capture_default_str();
    scan_cmd->add_option("--N", sc.N)->capture_default_str();
    scan_cmd->add_option("--jobs", sc.c.jobs, "worker threads")->capture_default_str();
    scan_cmd->add_option("--out", sc.out, "CSV file (default $DNSCATTER_OUTDIR/scan.csv)");
    scan_cmd->add_option("--svg", sc.svg, "also plot the curves to this SVG file");
    scan_cmd->add_option("--title", sc.title, "SVG title");

    PacketArgs pa;
    auto* packet = app.add_subcommand("wavepacket", "distance to the free asymptotes over time");
    add_common(packet, pa.c);
    packet->add_option("--alpha", pa.alpha, "window start")->capture_default_str();
    packet->add_option("--beta", pa.beta, "window end")->capture_default_str();
    packet->add_option("--envelope", pa.envelope, "bump (C-infinity) or spline (exactly C^1)")
        ->check(CLI::IsMember({"spline", "bump"}))
        ->capture_default_str();
    packet->add_option("--N", pa.N)->capture_default_str();
    packet->add_option("--nodes", pa.nodes, "Gauss-Legendre nodes per panel")->capture_default_str();
    packet->add_option("--times", pa.times, "sample times in units of (pi/2d)^-2")
        ->delimiter(',')
        ->capture_default_str();
    packet->add_option("--branch", pa.branch, "which limit to sample")
        ->check(CLI::IsMember({"both", "plus", "minus"}))
        ->capture_default_str();
    packet->add_flag("--check-quadrature", pa.check_quadrature,
                     "compare against doubled nodes at the largest time");
    packet->add_option("--jobs", pa.c.jobs, "worker threads")->capture_default_str();
    packet->add_option("--out", pa.out, "decay CSV (default $DNSCATTER_OUTDIR/decay.csv)");
    packet->add_option("--snapshot", pa.snapshot, "write the field at --snapshot-time as CSV");
    packet->add_option("--snapshot-time", pa.snapshot_time)->capture_default_str();

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "run the numerical self-checks");
    validate->add_option("--seed", va.seed, "seed for the random configurations")->capture_default_str();
    validate->add_option("--N", va.N)->capture_default_str();
    validate->add_option("--configs", va.configs)->capture_default_str();
    validate->add_flag("--json", va.json, "machine-readable report");

    ModesArgs ma;
    auto* modes = app.add_subcommand("modes", "mu_n and the overlap block as CSV");
    modes->add_option("--d", ma.d)->capture_default_str();
    modes->add_option("--N", ma.N)->capture_default_str();
    modes->add_option("--out", ma.out, "file (default standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (solve->parsed()) return cmd_solve(sa, out);
        if (scan_cmd->parsed()) return cmd_scan(sc, out, err);
        if (packet->parsed()) return cmd_wavepacket(pa, out);
        if (validate->parsed()) return cmd_validate(va, out);
        if (modes->parsed()) return cmd_modes(ma, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::exception& e) {
        err << "solver error: " << e.what() << '\n';
        return kSolverFailed;
    }
    return kBadInput;
}

}  // namespace dnscatter::cli
