// Command-line front end: run, sweep and list-models. Kept in a header so the
// test suite can drive it in-process.
#pragma once

#include "lightcone/catalog.hpp"
#include "lightcone/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace lightcone {

// ---------------------------------------------------------------------------
// pointwise survey used by the "curvature" analysis

struct CurvatureSurvey {
    int points = 0;
    int fiber_points = 0;
    double max_two_path_rel_error = 0.0;
    double max_eigenproduct_rel_error = 0.0;
    double max_umbilicity_spread = 0.0;
    double K_tilde_min = std::numeric_limits<double>::infinity();
    double K_tilde_max = -std::numeric_limits<double>::infinity();
    double lipschitz_killing_min = std::numeric_limits<double>::infinity();
    double lipschitz_killing_max = -std::numeric_limits<double>::infinity();
};

/// Uniform point in the sampling box of a chart, drawn from (seed, stream).
inline Point random_chart_point(const ParamChart& chart, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    Point u(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) {
        const Axis a = chart.sampling_axis(i);
        u[i] = a.lo + a.length() * rng.uniform();
    }
    return u;
}

/// Uniform unit vector in R^{m+1}.
inline std::vector<double> random_fiber_mu(int m, std::uint64_t seed, std::uint64_t stream) {
    if (m == 0) return {CounterRng(seed, stream).uniform() < 0.5 ? 1.0 : -1.0};
    CounterRng rng(seed, stream);
    std::vector<double> mu(m + 1);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& x : mu) {
            x = rng.normal();
            n2 += x * x;
        }
    } while (n2 < 1e-20);
    for (double& x : mu) x /= std::sqrt(n2);
    return mu;
}

inline CurvatureSurvey survey_curvature(const SubmanifoldModel& model, int points, std::uint64_t seed) {
    if (points < 1) throw std::invalid_argument("curvature survey needs at least one point");
    const int ci = model.covering_chart_index();
    const ParamChart& chart = model.chart(ci);
    const int m = model.fiber_dim();
    CurvatureSurvey out;
    out.points = points;
    for (int p = 0; p < points; ++p) {
        const Point u = random_chart_point(chart, seed, 2 * static_cast<std::uint64_t>(p));
        const Jet2 jet = evaluate_jet(model, ci, u);
        const NormalFrame frame = default_frame(jet);
        std::vector<std::vector<double>> mus;
        if (m == 0) {
            mus = {{1.0}, {-1.0}};
        } else {
            mus = {random_fiber_mu(m, seed, 2 * static_cast<std::uint64_t>(p) + 1)};
        }
        for (const auto& mu : mus) {
            const FiberPoint xi = fiber_direction(frame, mu);
            const auto paths = lipschitz_killing_paths(jet, frame.n_T, xi.xi);
            const double scale = std::max(std::abs(paths.factored), std::abs(paths.alternative));
            if (scale > 0.0)
                out.max_two_path_rel_error =
                    std::max(out.max_two_path_rel_error, std::abs(paths.factored - paths.alternative) / scale);
            const CurvatureSample c = curvature_sample(jet, frame.n_T, xi.xi);
            const double prod = c.principal.prod();
            const double pscale = std::max(std::abs(prod), std::abs(c.K_ell));
            if (pscale > 0.0)
                out.max_eigenproduct_rel_error = std::max(out.max_eigenproduct_rel_error, std::abs(prod - c.K_ell) / pscale);
            out.max_umbilicity_spread = std::max(out.max_umbilicity_spread, c.umbilicity_spread());
            out.K_tilde_min = std::min(out.K_tilde_min, c.K_ell_normalized);
            out.K_tilde_max = std::max(out.K_tilde_max, c.K_ell_normalized);
            out.lipschitz_killing_min = std::min(out.lipschitz_killing_min, c.lipschitz_killing);
            out.lipschitz_killing_max = std::max(out.lipschitz_killing_max, c.lipschitz_killing);
            ++out.fiber_points;
        }
    }
    return out;
}

/// Direction used by the flatness analysis: the model's own, else e_0 + e_1.
inline MinkVector default_flat_direction(const SubmanifoldModel& model) {
    if (model.flat_direction) return *model.flat_direction;
    return MinkVector::basis(model.ambient_dim, 0) + MinkVector::basis(model.ambient_dim, 1);
}

inline std::vector<Point> sampling_grid(const ParamChart& chart, int per_axis) {
    const int s = chart.dim();
    std::vector<Point> pts;
    std::vector<int> idx(s, 0);
    while (true) {
        Point u(s);
        for (int i = 0; i < s; ++i) {
            const Axis a = chart.sampling_axis(i);
            u[i] = a.periodic() ? a.lo + a.length() * idx[i] / per_axis
                                : a.lo + a.length() * idx[i] / (per_axis - 1);
        }
        pts.push_back(u);
        int d = 0;
        while (d < s && ++idx[d] == per_axis) idx[d++] = 0;
        if (d == s) break;
    }
    return pts;
}

namespace cli {

inline constexpr const char* kVersion = "1.0.0";

inline const std::vector<std::string>& analysis_names() {
    static const std::vector<std::string> names = {"curvature", "total",     "gauss-bonnet", "willmore",
                                                   "eta",       "convexity", "flatness",     "sweep"};
    return names;
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string model;
    ParamMap params;
    QuadratureSpec spec;
    std::vector<std::string> analyses{"total"};
    std::string out;
    bool json_stdout = false;
    std::string csv;
    int curvature_samples = 100;
    int flatness_grid = 10;
    ConvexityOptions convexity;
    VerdictTolerances tolerances;
    std::vector<int> levels{32, 64, 128, 256};
    std::string sweep_axis = "base";
    double sweep_rel_change = 0.10;
    bool timestamp = true;

    /// Rejects unknown models, parameters and analyses before any computation.
    void validate() const {
        if (model.empty()) throw ConfigError("no model given (use --model)");
        try {
            make_model(model, params);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (analyses.empty()) throw ConfigError("no analyses requested");
        for (const auto& a : analyses)
            if (std::find(analysis_names().begin(), analysis_names().end(), a) == analysis_names().end())
                throw ConfigError("unknown analysis: " + a);
        try {
            spec.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (curvature_samples < 1) throw ConfigError("curvature samples must be positive");
        if (flatness_grid < 2) throw ConfigError("flatness grid must be at least 2");
        if (convexity.density < 4) throw ConfigError("convexity density must be at least 4");
        if (!(convexity.tol > 0.0)) throw ConfigError("convexity tolerance must be positive");
        if (!(tolerances.tau >= 0.0)) throw ConfigError("tau tolerance must be non-negative");
        if (levels.size() < 2) throw ConfigError("a sweep needs at least two levels");
        for (int l : levels)
            if (l < 8) throw ConfigError("sweep levels must be at least 8");
        if (sweep_axis != "base" && sweep_axis != "fiber") throw ConfigError("sweep axis must be 'base' or 'fiber'");
        if (!(sweep_rel_change > 0.0)) throw ConfigError("sweep max-rel-change must be positive");
    }

    bool wants(const std::string& a) const { return std::find(analyses.begin(), analyses.end(), a) != analyses.end(); }
};

// ---------------------------------------------------------------------------
// value parsing

inline double parse_real(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(what + ": not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw ConfigError(what + ": not a finite number: '" + text + "'");
    return v;
}

inline long long parse_integer(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(what + ": not an integer: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError(what + ": not an integer: '" + text + "'");
    return v;
}

inline int parse_count(const std::string& text, const std::string& what) {
    const long long v = parse_integer(text, what);
    if (v < 0 || v > 1'000'000) throw ConfigError(what + ": out of range");
    return static_cast<int>(v);
}

inline std::uint64_t parse_seed(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("seed: not a non-negative integer: '" + text + "'");
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        throw ConfigError("seed: out of range");
    }
}

inline bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(what + ": not a boolean: '" + text + "'");
}

inline std::pair<std::string, double> parse_param(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects KEY=VALUE, got '" + kv + "'");
    return {kv.substr(0, eq), parse_real(kv.substr(eq + 1), "parameter " + kv.substr(0, eq))};
}

inline std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            part.erase(0, part.find_first_not_of(" \t"));
            part.erase(part.find_last_not_of(" \t") + 1);
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

inline std::vector<int> parse_levels(const std::vector<std::string>& items) {
    std::vector<int> out;
    for (const auto& s : split_list(items)) out.push_back(parse_count(s, "levels"));
    return out;
}

// ---------------------------------------------------------------------------
// config files

/// Applies one key of a config file; `section` is empty for top-level keys.
inline void apply_config_key(RunConfig& cfg, const std::string& section, const std::string& key,
                             const std::vector<std::string>& values) {
    auto one = [&]() -> const std::string& {
        if (values.size() != 1) throw ConfigError("config key '" + key + "' expects a single value");
        return values.front();
    };
    const std::string where = section.empty() ? key : section + "." + key;
    if (section == "params") {
        cfg.params[key] = parse_real(one(), "parameter " + key);
    } else if (section.empty() || section == "run") {
        if (key == "model") cfg.model = one();
        else if (key == "analyses") cfg.analyses = split_list(values);
        else if (key == "grid-base") cfg.spec.set_base(parse_count(one(), where));
        else if (key == "grid-fiber") cfg.spec.fiber_nodes = parse_count(one(), where);
        else if (key == "mc") cfg.spec.mc_directions = parse_count(one(), where);
        else if (key == "seed") cfg.spec.seed = parse_seed(one());
        else if (key == "threads") cfg.spec.threads = static_cast<unsigned>(parse_count(one(), where));
        else if (key == "out") cfg.out = one();
        else if (key == "csv") cfg.csv = one();
        else if (key == "json") cfg.json_stdout = parse_bool(one(), where);
        else throw ConfigError("unknown config key: " + where);
    } else if (section == "curvature") {
        if (key == "samples") cfg.curvature_samples = parse_count(one(), where);
        else throw ConfigError("unknown config key: " + where);
    } else if (section == "eta") {
        if (key == "mc") cfg.spec.mc_directions = parse_count(one(), where);
        else if (key == "search-density") cfg.spec.search_density = parse_count(one(), where);
        else throw ConfigError("unknown config key: " + where);
    } else if (section == "convexity") {
        if (key == "density") cfg.convexity.density = parse_count(one(), where);
        else if (key == "tol") cfg.convexity.tol = parse_real(one(), where);
        else if (key == "tau-tol") cfg.tolerances.tau = parse_real(one(), where);
        else throw ConfigError("unknown config key: " + where);
    } else if (section == "flatness") {
        if (key == "grid") cfg.flatness_grid = parse_count(one(), where);
        else throw ConfigError("unknown config key: " + where);
    } else if (section == "sweep") {
        if (key == "levels") cfg.levels = parse_levels(values);
        else if (key == "axis") cfg.sweep_axis = one();
        else if (key == "max-rel-change") cfg.sweep_rel_change = parse_real(one(), where);
        else throw ConfigError("unknown config key: " + where);
    } else {
        throw ConfigError("unknown config section: [" + section + "]");
    }
}

// Informational keys written by `list-models --json`; accepted and ignored.
inline bool is_metadata_key(const std::string& k) {
    static const std::set<std::string> keys = {"summary",   "description", "ambient_dim", "intrinsic_dim",
                                               "codim",     "closed",      "euler_characteristic",
                                               "morse_number", "version"};
    return keys.contains(k);
}

inline std::string json_scalar_text(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) {
        std::ostringstream os;
        os << std::setprecision(17) << v.get<double>();
        return os.str();
    }
    throw ConfigError("config key '" + key + "' has an unsupported value");
}

inline void apply_json_config(RunConfig& cfg, const json& doc) {
    if (!doc.is_object()) throw ConfigError("JSON config must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (is_metadata_key(key)) continue;
        if (value.is_object()) {
            for (const auto& [k, v] : value.items()) {
                std::vector<std::string> vals;
                if (v.is_array()) {
                    for (const auto& e : v) vals.push_back(json_scalar_text(e, k));
                } else {
                    vals.push_back(json_scalar_text(v, k));
                }
                apply_config_key(cfg, key, k, vals);
            }
        } else if (value.is_array()) {
            std::vector<std::string> vals;
            for (const auto& e : value) vals.push_back(json_scalar_text(e, key));
            apply_config_key(cfg, "", key, vals);
        } else {
            apply_config_key(cfg, "", key, {json_scalar_text(value, key)});
        }
    }
}

/// INI-style text (sections [params], [convexity], ...) or a JSON object.
inline void apply_config_stream(RunConfig& cfg, std::istream& in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("invalid JSON config: ") + e.what());
        }
        apply_json_config(cfg, doc);
        return;
    }
    std::istringstream ini_in(text);
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(ini_in);
    } catch (const CLI::Error& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;
        if (item.parents.size() > 1) throw ConfigError("nested config sections are not supported: " + item.fullname());
        apply_config_key(cfg, item.parents.empty() ? "" : item.parents.front(), item.name, item.inputs);
    }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    apply_config_stream(cfg, in);
}

// ---------------------------------------------------------------------------
// analyses

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct SweepRow {
    int level = 0;
    double tau_ell = 0.0;
    std::optional<double> gauss_bonnet_lhs;
    double runtime = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    bool converged = true;
    std::string note;
};

inline SweepResult run_sweep(const SubmanifoldModel& model, const RunConfig& cfg) {
    std::vector<int> levels = cfg.levels;
    std::sort(levels.begin(), levels.end());
    SweepResult res;
    for (int level : levels) {
        QuadratureSpec spec = cfg.spec;
        if (cfg.sweep_axis == "base") {
            spec.set_base(level);
        } else {
            spec.fiber_nodes = level;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const CurvatureTotals t = integrate_curvature(model, spec);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        SweepRow row{level, t.tau(), std::nullopt, dt};
        if (t.oriented) row.gauss_bonnet_lhs = t.signed_plus;
        res.rows.push_back(row);
    }
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        const double a = res.rows[i - 1].tau_ell, b = res.rows[i].tau_ell;
        if (std::abs(b - a) > cfg.sweep_rel_change * std::max(std::abs(a), std::abs(b))) {
            res.converged = false;
            std::ostringstream pct;
            pct << 100 * cfg.sweep_rel_change;
            res.note = "not converged: tau_ell changes by more than " + pct.str() + "% between levels " +
                       std::to_string(res.rows[i - 1].level) + " and " + std::to_string(res.rows[i].level);
            break;
        }
    }
    return res;
}

inline void write_sweep_csv(const SweepResult& res, std::ostream& os) {
    os << "level,tau_ell,gauss_bonnet_lhs,runtime\n";
    os << std::setprecision(15);
    for (const auto& r : res.rows) {
        os << r.level << ',' << r.tau_ell << ',';
        if (r.gauss_bonnet_lhs) os << *r.gauss_bonnet_lhs;
        os << ',' << std::setprecision(6) << r.runtime << std::setprecision(15) << '\n';
    }
}

struct RunOutcome {
    json report;
    int exit_code = 0;
};

/// Executes the requested analyses in a fixed order and assembles the report.
inline RunOutcome execute(const RunConfig& cfg) {
    cfg.validate();
    const SubmanifoldModel model = make_model(cfg.model, cfg.params);
    json results = json::object();
    json errors = json::array();
    TotalCurvatureReport rep;
    rep.model = model.name;
    rep.params = model.params;
    std::optional<CurvatureTotals> totals;
    std::optional<SupportReport> support;
    std::optional<TightnessVerdict> tight;
    std::vector<Verdict> extra;

    auto need_totals = [&]() -> const CurvatureTotals& {
        if (!totals) totals = integrate_curvature(model, cfg.spec);
        return *totals;
    };
    auto attempt = [&](const std::string& name, auto&& body) {
        if (!cfg.wants(name)) return;
        try {
            body();
        } catch (const std::exception& e) {
            errors.push_back({{"analysis", name}, {"message", e.what()}});
        }
    };

    attempt("curvature", [&] {
        const CurvatureSurvey s = survey_curvature(model, cfg.curvature_samples, cfg.spec.seed);
        results["curvature"] = {{"points", s.points},
                                {"fiber_points", s.fiber_points},
                                {"max_two_path_rel_error", s.max_two_path_rel_error},
                                {"max_eigenproduct_rel_error", s.max_eigenproduct_rel_error},
                                {"max_umbilicity_spread", s.max_umbilicity_spread},
                                {"K_tilde_min", s.K_tilde_min},
                                {"K_tilde_max", s.K_tilde_max},
                                {"lipschitz_killing_min", s.lipschitz_killing_min},
                                {"lipschitz_killing_max", s.lipschitz_killing_max}};
    });
    attempt("total", [&] {
        const CurvatureTotals& t = need_totals();
        rep.K_star = t.kstar;
        rep.area = t.area;
        rep.tau_ell = t.tau();
        if (t.oriented) {
            rep.tau_plus = t.abs_plus / t.gamma;
            rep.tau_minus = t.abs_minus / t.gamma;
            rep.abs_integral_plus = t.abs_plus;
            rep.abs_integral_minus = t.abs_minus;
        }
    });
    attempt("gauss-bonnet", [&] {
        if (model.codim() != 2) throw std::invalid_argument("Gauss-Bonnet integrals need codimension two");
        const Codim2Totals c = codim2_totals(need_totals());
        rep.gauss_bonnet_lhs = c.gauss_bonnet_lhs;
        rep.gauss_bonnet_lhs_minus = c.gauss_bonnet_lhs_minus;
        rep.abs_integral_plus = c.abs_plus;
        rep.abs_integral_minus = c.abs_minus;
    });
    attempt("willmore", [&] {
        if (model.intrinsic_dim != 2 || model.codim() != 2)
            throw std::invalid_argument("Willmore energy needs a surface of codimension two");
        if (!model.outward) throw std::invalid_argument("model declares no global n^S");
        const CurvatureTotals& t = need_totals();
        rep.willmore_plus = t.willmore_plus;
        rep.willmore_minus = t.willmore_minus;
    });
    attempt("eta", [&] { rep.eta = tau_via_eta(model, cfg.spec); });
    attempt("convexity", [&] {
        if (!model.closed) throw std::invalid_argument("convexity needs a closed model");
        const double tau = need_totals().tau();
        json block = json::object();
        if (model.codim() == 2) {
            ConvexityOptions opt = cfg.convexity;
            opt.threads = cfg.spec.threads;
            support = l_convexity_check(model, opt);
            block["support"] = to_json(*support);
        } else {
            block["support"] = {{"verdict", to_string(Convexity::Inconclusive)},
                                {"note", "lightlike convexity is only defined in codimension two"}};
        }
        tight = l_tightness_verdict(model, tau, cfg.tolerances.tau, support ? &*support : nullptr);
        block["tightness"] = to_json(*tight);
        results["tightness"] = block;
        if (support && model.sphere_topology()) {
            Verdict v;
            v.id = "convexity-tightness-consistency";
            v.description = "L-convex exactly when tau_l = 2 (sphere topology)";
            v.target = 2.0;
            v.measured = tau;
            v.tolerance = cfg.tolerances.tau;
            if (support->verdict == Convexity::Inconclusive) {
                v.skipped = true;
                v.pass = true;
                v.reason = "convexity check inconclusive";
            } else {
                v.pass = tight->verdict != Tightness::Inconclusive;
            }
            extra.push_back(v);
        }
    });
    attempt("flatness", [&] {
        const int ci = model.covering_chart_index();
        const auto pts = sampling_grid(model.chart(ci), cfg.flatness_grid);
        const FlatnessReport f = flatness_probe(model, pts, default_flat_direction(model), ci);
        json block = to_json(f);
        block["flat"] = f.flat(1e-10);
        results["flatness"] = block;
    });
    attempt("sweep", [&] {
        const SweepResult s = run_sweep(model, cfg);
        json rows = json::array();
        for (const auto& r : s.rows) {
            json row{{"level", r.level}, {"tau_ell", r.tau_ell}};
            row["gauss_bonnet_lhs"] = r.gauss_bonnet_lhs ? json(*r.gauss_bonnet_lhs) : json(nullptr);
            rows.push_back(row);
        }
        results["sweep"] = {{"axis", cfg.sweep_axis}, {"rows", rows}, {"converged", s.converged}};
        if (!s.converged) throw std::runtime_error(s.note);
    });
    if (!cfg.csv.empty()) {
        try {
            std::ofstream os(cfg.csv);
            if (!os) throw std::runtime_error("cannot open CSV output " + cfg.csv);
            write_curvature_csv(model, cfg.spec, os);
        } catch (const std::exception& e) {
            errors.push_back({{"analysis", "csv"}, {"message", e.what()}});
        }
    }

    merge_into(results, rep);
    std::vector<Verdict> verdicts = theorem_verdicts(rep, model, cfg.tolerances);
    verdicts.insert(verdicts.end(), extra.begin(), extra.end());
    json vj = json::array();
    bool all_pass = true;
    for (const auto& v : verdicts) {
        vj.push_back(to_json(v));
        all_pass = all_pass && v.pass;
    }

    json spec = to_json(cfg.spec);
    spec["analyses"] = cfg.analyses;
    spec["curvature_samples"] = cfg.curvature_samples;
    spec["convexity_density"] = cfg.convexity.density;
    spec["convexity_tol"] = cfg.convexity.tol;
    spec["tau_tol"] = cfg.tolerances.tau;
    spec["flatness_grid"] = cfg.flatness_grid;
    if (cfg.wants("sweep")) spec["levels"] = cfg.levels;

    RunOutcome out;
    out.report = json{{"model", model.name},     {"params", to_json(model.params)}, {"spec", spec},
                      {"results", results},      {"verdicts", vj},                  {"errors", errors},
                      {"seed", cfg.spec.seed},   {"version", kVersion}};
    if (cfg.timestamp) out.report["timestamp"] = utc_timestamp();
    out.exit_code = (errors.empty() && all_pass) ? 0 : 1;
    return out;
}

inline void print_summary(const json& report, std::ostream& os) {
    os << "model " << report["model"].get<std::string>() << ' ' << report["params"].dump() << '\n';
    for (const auto& [k, v] : report["results"].items()) {
        if (v.is_number()) os << "  " << k << " = " << std::setprecision(10) << v.get<double>() << '\n';
    }
    if (report["results"].contains("tightness")) {
        const auto& t = report["results"]["tightness"];
        os << "  convexity: " << t["support"]["verdict"].get<std::string>()
           << ", tightness: " << t["tightness"]["verdict"].get<std::string>() << '\n';
    }
    if (report["results"].contains("flatness"))
        os << "  flat: " << (report["results"]["flatness"]["flat"].get<bool>() ? "yes" : "no") << '\n';
    for (const auto& v : report["verdicts"]) {
        if (v["skipped"].get<bool>()) continue;
        os << "  [" << (v["pass"].get<bool>() ? "pass" : "FAIL") << "] " << v["id"].get<std::string>() << ": "
           << v["description"].get<std::string>() << '\n';
    }
    for (const auto& e : report["errors"])
        os << "  error in " << e["analysis"].get<std::string>() << ": " << e["message"].get<std::string>() << '\n';
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    const RunOutcome res = execute(cfg);
    if (!cfg.out.empty()) {
        std::ofstream os(cfg.out);
        if (!os) {
            err << "error: cannot write report to " << cfg.out << '\n';
            return 1;
        }
        os << res.report.dump(2) << '\n';
    }
    if (cfg.json_stdout) {
        out << res.report.dump(2) << '\n';
    } else {
        print_summary(res.report, out);
    }
    return res.exit_code;
}

inline json list_models_json() {
    json arr = json::array();
    for (const auto& e : catalog_entries()) {
        const SubmanifoldModel m = make_model(e.name);
        json o{{"model", e.name}, {"params", to_json(e.defaults)}, {"summary", e.summary},
               {"ambient_dim", m.ambient_dim}, {"intrinsic_dim", m.intrinsic_dim}, {"codim", m.codim()},
               {"closed", m.closed}};
        o["euler_characteristic"] = m.euler_characteristic ? json(*m.euler_characteristic) : json(nullptr);
        o["morse_number"] = m.morse_number ? json(*m.morse_number) : json(nullptr);
        arr.push_back(o);
    }
    return arr;
}

inline void list_models_text(std::ostream& os) {
    os << std::left << std::setw(24) << "model" << std::setw(7) << "n+1" << std::setw(4) << "s" << std::setw(4) << "k"
       << std::setw(8) << "closed" << std::setw(6) << "chi" << std::setw(10) << "gamma(M)" << "params\n";
    for (const auto& e : catalog_entries()) {
        const SubmanifoldModel m = make_model(e.name);
        std::ostringstream params;
        for (const auto& [k, v] : e.defaults) params << k << '=' << v << ' ';
        os << std::setw(24) << e.name << std::setw(7) << m.ambient_dim << std::setw(4) << m.intrinsic_dim
           << std::setw(4) << m.codim() << std::setw(8) << (m.closed ? "yes" : "no") << std::setw(6)
           << (m.euler_characteristic ? std::to_string(*m.euler_characteristic) : "-") << std::setw(10)
           << (m.morse_number ? std::to_string(*m.morse_number) : "-") << params.str() << "  " << e.summary << '\n';
    }
}

// ---------------------------------------------------------------------------
// argument parsing

struct Flags {
    std::string config;
    std::string model;
    std::vector<std::string> params;
    std::vector<std::string> analyses;
    int grid_base = 0;
    int grid_fiber = 0;
    int mc = 0;
    std::string seed;
    int threads = 0;
    std::string out;
    bool json = false;
    std::string csv;
    std::vector<std::string> levels;
    std::string axis;
};

inline void add_common(CLI::App* app, Flags& f, std::map<std::string, CLI::Option*>& opts) {
    opts["config"] = app->add_option("--config", f.config, "INI or JSON config file; flags override it");
    opts["model"] = app->add_option("--model", f.model, "catalog model name");
    opts["param"] = app->add_option("--param", f.params, "model parameter KEY=VALUE (repeatable)");
    opts["grid-base"] = app->add_option("--grid-base", f.grid_base, "base grid: N polar/open nodes, 2N periodic");
    opts["grid-fiber"] = app->add_option("--grid-fiber", f.grid_fiber, "fiber-sphere nodes per axis");
    opts["mc"] = app->add_option("--mc", f.mc, "Monte-Carlo directions for the eta estimate");
    opts["seed"] = app->add_option("--seed", f.seed, "random seed");
    opts["threads"] = app->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    opts["out"] = app->add_option("--out", f.out, "output path");
}

inline RunConfig build_config(const Flags& f, const std::map<std::string, CLI::Option*>& opts) {
    RunConfig cfg;
    auto given = [&](const char* k) {
        const auto it = opts.find(k);
        return it != opts.end() && it->second->count() > 0;
    };
    if (given("config")) apply_config_file(cfg, f.config);
    if (given("model")) cfg.model = f.model;
    for (const auto& kv : f.params) {
        const auto [k, v] = parse_param(kv);
        cfg.params[k] = v;
    }
    if (given("analyses")) cfg.analyses = split_list(f.analyses);
    if (given("grid-base")) cfg.spec.set_base(f.grid_base);
    if (given("grid-fiber")) cfg.spec.fiber_nodes = f.grid_fiber;
    if (given("mc")) cfg.spec.mc_directions = f.mc;
    if (given("seed")) cfg.spec.seed = parse_seed(f.seed);
    if (given("threads")) {
        if (f.threads < 0) throw ConfigError("--threads must be non-negative");
        cfg.spec.threads = static_cast<unsigned>(f.threads);
    }
    if (given("out")) cfg.out = f.out;
    if (given("json")) cfg.json_stdout = f.json;
    if (given("csv")) cfg.csv = f.csv;
    if (given("levels")) cfg.levels = parse_levels(f.levels);
    if (given("axis")) cfg.sweep_axis = f.axis;
    return cfg;
}

/// Entry point shared by the executable and the tests.
inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lightcone curvature invariants of spacelike submanifolds of Lorentz-Minkowski space", "lightcone"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Flags run_flags, sweep_flags;
    std::map<std::string, CLI::Option*> run_opts, sweep_opts;

    CLI::App* run_cmd = app.add_subcommand("run", "run analyses on one model and write a JSON report");
    add_common(run_cmd, run_flags, run_opts);
    run_opts["analyses"] = run_cmd->add_option("--analyses", run_flags.analyses,
                                               "comma-separated subset of curvature,total,gauss-bonnet,willmore,eta,"
                                               "convexity,flatness,sweep");
    run_opts["json"] = run_cmd->add_flag("--json", run_flags.json, "print the JSON report to stdout");
    run_opts["csv"] = run_cmd->add_option("--csv", run_flags.csv, "write per-node lightcone curvatures to this CSV");
    run_opts["levels"] = run_cmd->add_option("--levels", run_flags.levels, "grid levels for the sweep analysis");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "convergence sweep of tau_l over grid levels (CSV)");
    add_common(sweep_cmd, sweep_flags, sweep_opts);
    sweep_opts["levels"] = sweep_cmd->add_option("--levels", sweep_flags.levels, "grid levels, e.g. 32,64,128,256");
    sweep_opts["axis"] = sweep_cmd->add_option("--axis", sweep_flags.axis, "grid parameter to refine: base or fiber");

    bool list_json = false;
    CLI::App* list_cmd = app.add_subcommand("list-models", "list the built-in models");
    list_cmd->add_flag("--json", list_json, "machine-readable listing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (list_cmd->parsed()) {
        if (list_json) {
            out << list_models_json().dump(2) << '\n';
        } else {
            list_models_text(out);
        }
        return 0;
    }

    const bool is_run = run_cmd->parsed();
    RunConfig cfg;
    try {
        cfg = is_run ? build_config(run_flags, run_opts) : build_config(sweep_flags, sweep_opts);
        if (!is_run) cfg.analyses = {"sweep"};
        cfg.validate();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (is_run) {
        try {
            return run(cfg, out, err);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return 1;
        }
    }

    try {
        const SweepResult res = run_sweep(make_model(cfg.model, cfg.params), cfg);
        if (cfg.out.empty()) {
            write_sweep_csv(res, out);
        } else {
            std::ofstream os(cfg.out);
            if (!os) {
                err << "error: cannot write " << cfg.out << '\n';
                return 1;
            }
            write_sweep_csv(res, os);
        }
        if (!res.converged) {
            err << res.note << '\n';
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace cli
}  // namespace lightcone
