#include "lipsharp/json_io.hpp"

#include <stdexcept>

namespace lipsharp::io {

using num::BigInt;
using num::Dyadic;
using num::Exp2;

json exp2_to_json(const Exp2& v) {
    if (v.is_zero()) return 0.0;
    if (std::fabs(v.log2_abs()) <= 900.0) return v.to_double();
    return json{{"m", v.m}, {"e2", v.e}};
}

Exp2 exp2_from_json(const json& j) {
    if (j.is_number()) return Exp2::from_double(j.get<double>());
    if (j.is_object() && j.contains("m") && j.contains("e2")) {
        Exp2 r = Exp2::from_double(j["m"].get<double>());
        r.e += j["e2"].get<std::int64_t>();
        return r;
    }
    throw std::invalid_argument("exp2_from_json: expected number or {m, e2}");
}

json dyadic_to_json(const Dyadic& v) { return v.str(); }

Dyadic dyadic_from_json(const json& j) {
    if (j.is_number_integer()) return Dyadic(BigInt(j.get<long long>()), 0);
    if (!j.is_string()) throw std::invalid_argument("dyadic_from_json: expected string");
    const std::string s = j.get<std::string>();
    const auto pos = s.find("/2^");
    if (pos == std::string::npos) return Dyadic(BigInt(s), 0);
    return Dyadic(BigInt(s.substr(0, pos)), std::stoll(s.substr(pos + 3)));
}

json step_function_to_json(const lorentz::StepFunction& f) {
    return json{{"breakpoints", f.breakpoints()},
                {"values", f.values()},
                {"rearranged", f.rearranged()}};
}

lorentz::StepFunction step_function_from_json(const json& j) {
    return lorentz::StepFunction(j.at("breakpoints").get<std::vector<double>>(),
                                 j.at("values").get<std::vector<double>>(),
                                 j.value("rearranged", false));
}

json profile_to_json(const lorentz::RadialProfile& g) {
    json params = json::object();
    if (g.name == "log") {
        params["N"] = static_cast<int>(g.params.at(0));
    } else if (g.name == "constant") {
        params["c"] = g.params.at(0);
        params["m"] = g.params.at(1);
    } else if (g.name == "power") {
        params["p"] = g.params.at(0);
        params["m"] = g.params.at(1);
    }
    return json{{"name", g.name}, {"params", params}};
}

lorentz::RadialProfile profile_from_json(const json& j) {
    const std::string name = j.at("name").get<std::string>();
    const json& p = j.value("params", json::object());
    if (name == "log") return lorentz::log_capacity_profile(p.value("N", 2));
    if (name == "constant") return lorentz::constant_profile(p.value("c", 1.0), p.value("m", 1.0));
    if (name == "power") return lorentz::power_profile(p.value("p", 0.5), p.value("m", 1.0));
    throw std::invalid_argument("profile_from_json: unknown profile '" + name + "'");
}

json params_to_json(const cubetree::ParamSequence& p) {
    json out;
    out["N"] = p.dim();
    out["mode"] = p.mode() == cubetree::Mode::Strict ? "strict" : "relaxed";
    out["j"] = p.j_seq();
    std::vector<std::int64_t> k, l, a_exp;
    std::vector<std::string> card;
    for (int n = 0; n <= p.n_max(); ++n) {
        k.push_back(p.k(n));
        card.push_back(p.cardinality(n).str());
    }
    for (int n = 0; n + 1 <= p.n_max(); ++n) {
        l.push_back(p.l(n));
        a_exp.push_back(p.a_exp(n));
    }
    out["k"] = k;
    out["l"] = l;
    out["a_exp"] = a_exp;  // a_n = 2^{-a_exp[n]}
    out["card"] = card;
    json eps = json::array();
    for (int n = 0; n <= p.n_max(); ++n) eps.push_back(exp2_to_json(p.eps(n)));
    out["eps"] = eps;
    return out;
}

cubetree::ParamSequence params_from_json(const json& j) {
    const int N = j.at("N").get<int>();
    const auto mode = j.value("mode", "strict") == std::string("strict")
                          ? cubetree::Mode::Strict
                          : cubetree::Mode::Relaxed;
    auto js = j.at("j").get<std::vector<std::int64_t>>();
    return cubetree::ParamSequence(N, std::move(js), mode);
}

json chain_to_json(const cubetree::CubeChain& c) {
    json levels = json::array();
    for (const auto& off : c.offsets) {
        json v = json::array();
        for (const auto& x : off) v.push_back(x.str());
        levels.push_back(v);
    }
    return json{{"offsets", levels}};
}

cubetree::CubeChain chain_from_json(const json& j) {
    cubetree::CubeChain c;
    for (const auto& lvl : j.at("offsets")) {
        std::vector<BigInt> off;
        for (const auto& s : lvl) off.emplace_back(s.get<std::string>());
        c.offsets.push_back(std::move(off));
    }
    return c;
}

json bump_to_json(const capacity::Bump& b) {
    json center = json::array();
    for (const auto& c : b.spec.center) center.push_back(dyadic_to_json(c));
    json out;
    out["center"] = center;
    out["N"] = b.spec.N;
    out["q_S"] = b.spec.q_S;
    out["eps"] = exp2_to_json(b.spec.eps);
    out["tau"] = exp2_to_json(b.spec.tau);
    out["norm_budget"] = exp2_to_json(b.spec.norm_budget);
    out["profile"] = profile_to_json(b.spec.profile);
    out["C_N"] = b.C_N;
    out["u0"] = exp2_to_json(b.u0);
    out["u1"] = b.u1;
    out["lambda"] = exp2_to_json(b.lambda);
    out["Lambda"] = exp2_to_json(b.Lambda);
    if (std::isfinite(b.log2_delta))
        out["log2_delta"] = b.log2_delta;
    else
        out["log2_delta"] = nullptr;  // below representable range; u0 carries the radius
    out["annulus_norm"] = b.annulus_norm;
    out["lip_norm"] = exp2_to_json(b.lip_norm);
    out["search_steps"] = b.search_steps;
    return out;
}

json grid_field_to_json(const gradcheck::GridField& g) {
    return json{{"dim", g.dim()}, {"nodes_per_axis", g.nodes_per_axis()}, {"values", g.values()}};
}

gradcheck::GridField grid_field_from_json(const json& j) {
    gradcheck::GridField g(j.at("dim").get<int>(), j.at("nodes_per_axis").get<int>());
    const auto vals = j.at("values").get<std::vector<double>>();
    if (vals.size() != g.size()) throw std::invalid_argument("grid_field_from_json: size mismatch");
    for (std::size_t i = 0; i < vals.size(); ++i) g[i] = vals[i];
    return g;
}

}  // namespace lipsharp::io
