#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "plankforge/bounds.hpp"
#include "plankforge/plank.hpp"
#include "plankforge/polynomial.hpp"
#include "plankforge/remez.hpp"
#include "plankforge/space.hpp"
#include "plankforge/sup_norm.hpp"

namespace plankforge {

using json = nlohmann::ordered_json;

// Polynomial wire format:
//   {"dim": d, "field": "real"|"complex",
//    "terms": [{"exp": [..], "re": x, "im": y}, ...]}
// Terms are emitted in graded-lex order; exact zeros are never stored.
inline json poly_to_json(const Polynomial& P) {
    json j;
    j["dim"] = P.dim();
    j["field"] = P.field() == Field::real ? "real" : "complex";
    j["terms"] = json::array();
    for (const auto& [e, c] : P.terms()) {
        json term;
        term["exp"] = e;
        term["re"] = c.real();
        term["im"] = c.imag();
        j["terms"].push_back(std::move(term));
    }
    return j;
}

inline Polynomial poly_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const std::string field_name = j.at("field").get<std::string>();
    Field field;
    if (field_name == "real") field = Field::real;
    else if (field_name == "complex") field = Field::complex;
    else throw std::invalid_argument("polynomial json: unknown field '" + field_name + "'");
    Polynomial p(dim, field);
    for (const auto& term : j.at("terms")) {
        const MultiIndex e = term.at("exp").get<MultiIndex>();
        p.add_term(e, Coeff{term.at("re").get<double>(), term.at("im").get<double>()});
    }
    return p;
}

inline Polynomial load_polynomial(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open polynomial file '" + path + "'");
    json j;
    in >> j;
    return poly_from_json(j);
}

inline void save_polynomial(const Polynomial& P, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write polynomial file '" + path + "'");
    out << poly_to_json(P).dump(2) << "\n";
}

// Points in the flat real layout are grouped back into [re, im] pairs for
// complex spaces.
inline json point_to_json(const SpaceSpec& S, const std::vector<double>& x) {
    json j = json::array();
    if (S.field == Field::real) {
        for (double v : x) j.push_back(v);
    } else {
        for (int i = 0; i < S.d; ++i) j.push_back(json::array({x[2 * i], x[2 * i + 1]}));
    }
    return j;
}

inline json estimate_to_json(const NormEstimate& est, const SpaceSpec& S) {
    json j;
    j["value"] = est.value;
    j["argmax"] = point_to_json(S, est.argmax);
    j["starts"] = est.starts;
    j["converged_fraction"] = est.converged_fraction;
    j["seed"] = est.seed;
    return j;
}

inline json allocation_to_json(const Allocation& a) {
    json j;
    j["b"] = a.b;
    j["t"] = a.t;
    if (a.c.has_value()) j["c"] = *a.c;
    j["method"] = allocation_method_name(a.method);
    j["certificate_slack"] = a.certificate_slack;
    return j;
}

inline json plank_report_to_json(const PlankReport& rep, const PlankInstance& inst) {
    json j;
    j["regime"] = regime_name(inst.regime);
    j["space"] = space_to_string(inst.space);
    j["radii"] = inst.radii;
    j["degrees"] = inst.degrees;
    j["gate"] = {{"lhs", inst.gate_lhs()}, {"budget", inst.gate_budget()}};
    if (inst.regime == PlankRegime::k_custom || inst.regime == PlankRegime::finite_dim)
        j["K"] = inst.K;
    j["allocation"] = allocation_to_json(rep.allocation);
    j["s"] = rep.s;
    j["r"] = rep.r;
    j["total_degree"] = rep.total_degree;
    j["witness"] = point_to_json(inst.space, rep.witness);
    j["margins"] = rep.margins;
    j["objective"] = rep.objective;
    j["starts"] = rep.starts;
    j["converged_fraction"] = rep.converged_fraction;
    j["success"] = rep.success;
    j["seed"] = rep.seed;
    return j;
}

inline json verify_report_to_json(const VerifyReport& rep, const SpaceSpec& S) {
    json j;
    j["log_bound"] = rep.log_bound;
    j["log_lhs"] = rep.log_lhs;
    j["log_rhs"] = rep.log_rhs;
    j["margin"] = rep.margin;
    j["pass"] = rep.pass;
    j["product_estimate"] = estimate_to_json(rep.product_estimate, S);
    j["factor_estimates"] = json::array();
    for (const auto& e : rep.factor_estimates)
        j["factor_estimates"].push_back(estimate_to_json(e, S));
    return j;
}

inline json sublevel_to_json(const SublevelEstimate& e) {
    json j;
    j["t"] = e.t;
    j["measure"] = e.measure;
    j["stderr"] = e.stderr_;
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    j["bound"] = e.bound;
    j["pass"] = e.pass;
    return j;
}

inline json lemma8_to_json(const Lemma8Report& r) {
    json j;
    j["integral"] = r.integral;
    j["stderr"] = r.stderr_;
    j["t_max"] = r.t_max;
    j["k"] = r.k;
    j["d"] = r.d;
    j["bound"] = r.bound;
    j["pass"] = r.pass;
    j["homog_applicable"] = r.homog_applicable;
    if (r.homog_applicable) {
        j["bound_homog"] = r.bound_homog;
        j["pass_homog"] = r.pass_homog;
    }
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    return j;
}

}  // namespace plankforge
