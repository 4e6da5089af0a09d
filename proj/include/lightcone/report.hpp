// JSON forms of the analysis results.
#pragma once

#include "lightcone/tightness.hpp"

#include <json.hpp>

namespace lightcone {

using json = nlohmann::ordered_json;

inline json to_json(const MinkVector& v) {
    json a = json::array();
    for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
    return a;
}

inline json to_json(const Point& u) {
    json a = json::array();
    for (Eigen::Index i = 0; i < u.size(); ++i) a.push_back(u[i]);
    return a;
}

inline json to_json(const ParamMap& p) {
    json o = json::object();
    for (const auto& [k, v] : p) o[k] = v;
    return o;
}

inline json to_json(const QuadratureSpec& s) {
    return json{{"polar_nodes", s.polar_nodes},       {"periodic_nodes", s.periodic_nodes},
                {"open_nodes", s.open_nodes},         {"fiber_nodes", s.fiber_nodes},
                {"mc_directions", s.mc_directions},   {"search_density", s.search_density},
                {"split_tol", s.split_tol},           {"seed", s.seed}};
}

inline json to_json(const Verdict& v) {
    json o{{"id", v.id}, {"description", v.description}};
    o["target"] = v.target ? json(*v.target) : json(nullptr);
    o["measured"] = v.measured ? json(*v.measured) : json(nullptr);
    o["tolerance"] = v.tolerance;
    o["pass"] = v.pass;
    o["skipped"] = v.skipped;
    if (!v.reason.empty()) o["reason"] = v.reason;
    return o;
}

inline json to_json(const SupportReport& r) {
    json pairs = json::array();
    for (const auto& p : r.violating_pairs)
        pairs.push_back({{"base", to_json(p.base)}, {"sign", p.sign}, {"test", to_json(p.test)}, {"violation", p.violation}});
    json o{{"verdict", to_string(r.verdict)},
           {"worst_violation", r.worst_violation},
           {"tolerance", r.tolerance},
           {"base_points", r.base_points},
           {"test_points", r.test_points},
           {"curvature_spacing", r.curvature_spacing},
           {"coarse_warning", r.coarse_warning},
           {"violating_pairs", pairs}};
    if (!r.note.empty()) o["note"] = r.note;
    return o;
}

inline json to_json(const TightnessVerdict& t) {
    json o{{"verdict", to_string(t.verdict)}, {"tau_ell", t.tau_ell}, {"gamma", t.gamma}, {"tau_tol", t.tau_tol}};
    if (!t.note.empty()) o["note"] = t.note;
    return o;
}

inline json to_json(const FlatnessReport& f) {
    return json{{"direction", to_json(f.direction)},
                {"max_abs_h", f.max_abs_h},
                {"gauss_map_spread", f.gauss_map_spread},
                {"tangential_residual", f.tangential_residual},
                {"samples", f.samples}};
}

/// Flat result keys of a TotalCurvatureReport, merged into `results`.
inline void merge_into(json& results, const TotalCurvatureReport& r) {
    if (r.K_star) results["K_star_samples"] = {{"min", r.K_star->min}, {"max", r.K_star->max}, {"mean", r.K_star->mean}};
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) results[key] = *v;
    };
    put("area", r.area);
    put("tau_ell", r.tau_ell);
    put("tau_plus", r.tau_plus);
    put("tau_minus", r.tau_minus);
    put("abs_integral_plus", r.abs_integral_plus);
    put("abs_integral_minus", r.abs_integral_minus);
    put("gauss_bonnet_lhs", r.gauss_bonnet_lhs);
    put("gauss_bonnet_lhs_minus", r.gauss_bonnet_lhs_minus);
    put("willmore_energy", r.willmore_plus);
    put("willmore_energy_minus", r.willmore_minus);
    if (r.eta) {
        results["tau_via_eta"] = r.eta->mean;
        results["tau_via_eta_stderr"] = r.eta->stderr_;
        results["eta_used"] = r.eta->used;
        results["eta_flagged"] = r.eta->flagged;
    }
}

}  // namespace lightcone
