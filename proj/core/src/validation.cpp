#include "dnscatter/validation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "dnscatter/errors.hpp"

namespace dnscatter {

double dphi_relative_error(const ScatteringConfig& cfg, int N, double h, const SolverOptions& opts) {
    const Eigen::VectorXcd f = dphi_dk(cfg, N, DerivativeMode::Formula, h, opts);
    const Eigen::VectorXcd d = dphi_dk(cfg, N, DerivativeMode::FiniteDifference, h, opts);
    return norm_weighted(0.5, Eigen::VectorXcd(f - d)) / norm_weighted(0.5, f);
}

ScatteringConfig dphi_reference_config() {
    const Geometry g(1.0);
    return {g, 1, 2.83 * g.half_pi_over_d()};
}

std::vector<ScatteringConfig> random_configs(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ku(0.1, 5.0);
    std::uniform_int_distribution<int> n0d(1, 2);
    const Geometry g(1.0);
    const double unit = g.half_pi_over_d();
    std::vector<ScatteringConfig> out;
    while (static_cast<int>(out.size()) < count) {
        const int n0 = n0d(rng);
        const double k = ku(rng) * unit;
        if (threshold_distance(k, n0, g) < 1e-3 * unit) continue;
        out.emplace_back(g, n0, k);
    }
    return out;
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof(line), "%-28s %-6s %14s %14s\n", "check", "result", "value", "limit");
    os << line;
    for (const auto& c : checks) {
        std::snprintf(line, sizeof(line), "%-28s %-6s %14.6e %14.6e", c.name.c_str(),
                      c.passed ? "PASS" : "FAIL", c.value, c.limit);
        os << line;
        if (!c.detail.empty()) os << "  " << c.detail;
        os << '\n';
    }
    os << (all_passed() ? "all checks passed\n" : "some checks FAILED\n");
    return os.str();
}

std::string ValidationReport::to_json() const {
    nlohmann::json j;
    j["passed"] = all_passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"value", c.value},
                               {"limit", c.limit},
                               {"detail", c.detail}});
    }
    return j.dump(2);
}

namespace {

ValidationCheck upper(std::string name, double value, double limit, std::string detail = {}) {
    ValidationCheck c;
    c.name = std::move(name);
    c.value = value;
    c.limit = limit;
    c.passed = value < limit;
    c.detail = std::move(detail);
    return c;
}

}  // namespace

ValidationReport run_validation(const ValidationOptions& opts) {
    ValidationReport rep;

    {
        double worst = 0.0;
        std::string where;
        for (int n = 1; n <= opts.overlap_nmax; ++n) {
            for (int m = 1; m <= opts.overlap_nmax; ++m) {
                const double e = std::abs(opts.overlap_fn(n, m) - overlap_quadrature(n, m, 1e-12));
                if (!(e <= worst)) {
                    worst = e;
                    where = "at (" + std::to_string(n) + "," + std::to_string(m) + ")";
                }
            }
        }
        rep.checks.push_back(upper("overlap_vs_quadrature", worst, 1e-10, where));
    }

    const auto cfgs = random_configs(opts.seed, opts.configs);
    double split_err = 0.0, eig_imag = 0.0, min_one_minus = INFINITY, norm_excess = -INFINITY;
    double min_eig = INFINITY, sym = 0.0, var_err = 0.0;
    for (const auto& cfg : cfgs) {
        const TraceSolution direct = solve_matching(cfg, opts.N);
        const SplitSolution split = solve_matching_split(cfg, opts.N);
        split_err = std::max(split_err, (split.solution.c - direct.c).norm() / direct.c.norm());
        eig_imag = std::max(eig_imag, split.max_eig_imag);
        min_one_minus = std::min(min_one_minus, split.min_abs_one_minus_i_lambda);

        const TruncatedOperator op = assemble(cfg, opts.N);
        norm_excess = std::max(norm_excess, weighted_operator_norm(op) - 2.0 * std::sqrt(op.chan.E));

        const D2Report d2 = d2_check(cfg, opts.N);
        min_eig = std::min(min_eig, d2.min_eig);
        sym = std::max(sym, d2.sym_defect);
    }
    rep.checks.push_back(upper("split_vs_direct", split_err, 1e-8));
    rep.checks.push_back(upper("M_eigenvalues_real", eig_imag, 1e-10));
    {
        ValidationCheck c;
        c.name = "det_I_minus_iM";
        c.value = min_one_minus;
        c.limit = 1.0;
        c.passed = min_one_minus >= 1.0 - 1e-12;
        c.detail = "min |1 - i lambda_j|";
        rep.checks.push_back(c);
    }
    rep.checks.push_back(upper("operator_norm_bound", norm_excess, 1e-9, "max(norm - 2 sqrt(E))"));
    {
        ValidationCheck c;
        c.name = "d2_min_eig_positive";
        c.value = min_eig;
        c.limit = 0.0;
        c.passed = min_eig > 0.0;
        rep.checks.push_back(c);
    }
    rep.checks.push_back(upper("d2_inverse_symmetry", sym, 1e-10));

    {
        std::mt19937_64 rng(opts.seed + 1);
        std::normal_distribution<double> nd;
        const int Nv = std::min(opts.N, 100);
        for (int i = 0; i < 3; ++i) {
            const ScatteringConfig& cfg = cfgs[static_cast<std::size_t>(i) % cfgs.size()];
            Eigen::VectorXcd psi(Nv);
            for (int j = 0; j < Nv; ++j) psi(j) = cplx(nd(rng), nd(rng)) / static_cast<double>(j + 1);
            const Eigen::MatrixXd B = d2_matrix(cfg, Nv);
            Eigen::VectorXcd direct(Nv);
            const Eigen::LLT<Eigen::MatrixXd> llt(B);
            direct.real() = llt.solve(psi.real());
            direct.imag() = llt.solve(psi.imag());
            const VariationalResult v = solve_d2_variational(psi, cfg, Nv);
            var_err = std::max(var_err, (v.phi - direct).norm() / direct.norm());
        }
        rep.checks.push_back(upper("variational_vs_direct", var_err, 1e-6));
    }

    {
        const BasisAngle a1 = estimate_basis_angle(1);
        rep.checks.push_back(upper("eps1_is_2_over_pi", std::abs(a1.eps - 2.0 / std::numbers::pi), 1e-12));
        bool inside = true;
        double worst = INFINITY;
        for (int N : {2, 4, 8, 16, 32, 64}) {
            const BasisAngle a = estimate_basis_angle(N);
            inside = inside && a.eps_strictly_inside_unit_interval();
            worst = std::min(worst, a.one_minus_eps);
        }
        ValidationCheck c;
        c.name = "epsN_inside_unit_interval";
        c.value = worst;
        c.limit = 0.0;
        c.passed = inside;
        c.detail = "min (1 - eps_N), N <= 64";
        rep.checks.push_back(c);
    }

    rep.checks.push_back(upper("dphi_dk_vs_difference",
                               dphi_relative_error(dphi_reference_config(), opts.N, 1e-5), 1e-4));
    return rep;
}

}  // namespace dnscatter
