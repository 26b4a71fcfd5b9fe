#include "dnscatter/serialization.hpp"

#include <json.hpp>

#include "dnscatter/errors.hpp"

namespace dnscatter {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXcd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
    return arr;
}

Eigen::VectorXcd vec_from_json(const json& arr, const char* name) {
    if (!arr.is_array()) throw InvalidArgument(std::string("field '") + name + "' must be an array");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& p = arr[i];
        if (!p.is_array() || p.size() != 2) {
            throw InvalidArgument(std::string("field '") + name + "' entries must be [re, im]");
        }
        v(static_cast<Eigen::Index>(i)) = cplx(p[0].get<double>(), p[1].get<double>());
    }
    return v;
}

}  // namespace

std::string to_json(const TraceSolution& sol, int indent) {
    json j;
    j["config"] = {{"d", sol.cfg.geom.d},
                   {"n0", sol.cfg.n0},
                   {"k", sol.cfg.k},
                   {"incidence", sol.incidence == Incidence::Left ? "left" : "right"}};
    j["N"] = sol.N;
    j["Nt"] = sol.Nt;
    j["n1"] = sol.n1;
    j["c"] = vec_to_json(sol.c);
    j["r"] = vec_to_json(sol.r);
    j["t"] = vec_to_json(sol.t);
    j["residual_cont"] = sol.residual_cont;
    j["residual_deriv"] = sol.residual_deriv;
    j["cond"] = sol.cond;
    return j.dump(indent);
}

TraceSolution trace_solution_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const json& cfg = j.at("config");
        TraceSolution sol;
        sol.cfg = ScatteringConfig(Geometry(cfg.at("d").get<double>()), cfg.at("n0").get<int>(),
                                   cfg.at("k").get<double>());
        const std::string inc = cfg.value("incidence", std::string("left"));
        if (inc != "left" && inc != "right") throw InvalidArgument("incidence must be left|right");
        sol.incidence = inc == "left" ? Incidence::Left : Incidence::Right;
        sol.N = j.at("N").get<int>();
        sol.Nt = j.at("Nt").get<int>();
        sol.n1 = j.at("n1").get<int>();
        sol.c = vec_from_json(j.at("c"), "c");
        sol.r = vec_from_json(j.at("r"), "r");
        sol.t = vec_from_json(j.at("t"), "t");
        sol.residual_cont = j.at("residual_cont").get<double>();
        sol.residual_deriv = j.at("residual_deriv").get<double>();
        sol.cond = j.at("cond").get<double>();
        if (sol.c.size() != sol.N) throw InvalidArgument("length of c differs from N");
        return sol;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed solution JSON: ") + e.what());
    }
}

}  // namespace dnscatter
