// Quadrature of the lightcone curvature integrals: K*_l(p), tau_l, tau^+-,
// Gauss-Bonnet and Willmore integrals, the eta Monte-Carlo estimate of tau_l,
// and the inequality verdicts built on them.
#pragma once

#include "lightcone/heightfn.hpp"
#include "lightcone/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightcone {

struct QuadratureSpec {
    int polar_nodes = 128;
    int periodic_nodes = 256;
    int open_nodes = 128;
    int fiber_nodes = 64;
    int mc_directions = 200;
    std::uint64_t seed = 20240917;
    unsigned threads = 1;
    int search_density = 64;
    double split_tol = 1e-10;

    /// Base grid of N: N nodes on polar and open axes, 2N on periodic ones.
    static QuadratureSpec with_base(int n) {
        QuadratureSpec s;
        s.set_base(n);
        return s;
    }

    void set_base(int n) {
        polar_nodes = open_nodes = n;
        periodic_nodes = 2 * n;
    }

    void validate() const {
        for (int v : {polar_nodes, periodic_nodes, open_nodes, fiber_nodes, search_density})
            if (v < 8) throw std::invalid_argument("quadrature sizes must be at least 8");
        if (mc_directions < 1) throw std::invalid_argument("mc_directions must be positive");
    }

    int nodes_for(const Axis& a) const {
        switch (a.kind) {
            case AxisKind::Periodic: return periodic_nodes;
            case AxisKind::Polar: return polar_nodes;
            case AxisKind::Open: return open_nodes;
        }
        return open_nodes;
    }

    Rule1D rule_for(const Axis& a) const {
        return a.periodic() ? periodic_trapezoid(nodes_for(a), a.lo, a.length()) : gauss_legendre(nodes_for(a), a.lo, a.hi);
    }

    CriticalSearchOptions search() const {
        CriticalSearchOptions o;
        o.grid_density = search_density;
        return o;
    }
};

inline FiberRule fiber_rule_for(const SubmanifoldModel& model, const QuadratureSpec& spec) {
    return make_fiber_rule(model.fiber_dim(), spec.fiber_nodes);
}

/// K*_l(p) = sum over the fiber rule of w |(-N_h)^{k-2} K~_l(n^T)(p, xi)|.
inline double pointwise_total_curvature(const Jet2& jet, const NormalFrame& frame, const FiberRule& rule) {
    if (rule.sphere_dim + 1 != static_cast<int>(frame.n_S.size()))
        throw std::invalid_argument("fiber rule does not match the normal frame");
    const int k = jet.ambient_dim() - jet.intrinsic_dim();
    double total = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const FiberPoint xi = fiber_direction(frame, rule.mu[q]);
        const FundamentalForms f = second_fundamental(jet, frame.n_T, xi);
        const double nh = nh_factor(frame.n_T, xi.xi);
        const double lk = std::pow(-nh, k - 2) * gauss_kronecker(f) * std::pow(nh, jet.intrinsic_dim());
        total += rule.weights[q] * std::abs(lk);
    }
    return total;
}

inline double pointwise_total_curvature(const SubmanifoldModel& model, int chart, const Point& u,
                                        const FiberRule& rule) {
    const Jet2 jet = evaluate_jet(model, chart, u);
    return pointwise_total_curvature(jet, default_frame(jet), rule);
}

// ---------------------------------------------------------------------------
// base integration engine

inline constexpr int kQuantities = 8;
using Quantities = std::array<double, kQuantities>;

struct BaseSample {
    Quantities values{};              // densities with respect to dv_M
    std::array<double, 2> probes{};   // signed quantities whose zeros are kinks
    int nprobes = 0;
};

using BaseIntegrand = std::function<BaseSample(const Jet2&)>;

struct BaseIntegral {
    Quantities totals{};
    double min0 = std::numeric_limits<double>::infinity();
    double max0 = -std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::size_t splits = 0;
};

namespace detail {

inline double area_element(const Jet2& jet) {
    return std::sqrt(first_fundamental(jet).g.determinant());
}

struct ColumnResult {
    Quantities totals{};
    double min0 = std::numeric_limits<double>::infinity();
    double max0 = -std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::size_t splits = 0;
};

/// Integrates along axis 0 with the other coordinates fixed; pieces between
/// detected probe zeros get their own Gauss-Legendre rule.
inline ColumnResult integrate_column(const ParamChart& chart, const QuadratureSpec& spec, const BaseIntegrand& f,
                                     const Point& base, const Rule1D& r0) {
    const Axis& ax = chart.axes[0];
    const int m = static_cast<int>(r0.nodes.size());
    ColumnResult out;

    auto eval = [&](double x) {
        Point u = base;
        u[0] = ax.periodic() ? wrap_periodic(x, ax) : x;
        const Jet2 jet = chart.jet(u);
        ++out.evaluations;
        BaseSample s = f(jet);
        out.min0 = std::min(out.min0, s.values[0]);
        out.max0 = std::max(out.max0, s.values[0]);
        return std::pair<BaseSample, double>(s, area_element(jet));
    };

    std::vector<std::pair<BaseSample, double>> native;
    native.reserve(m);
    for (int i = 0; i < m; ++i) native.push_back(eval(r0.nodes[i]));

    std::vector<double> breaks;
    auto probe_at = [&](double x, int p) {
        Point u = base;
        u[0] = ax.periodic() ? wrap_periodic(x, ax) : x;
        ++out.evaluations;
        return f(chart.jet(u)).probes[p];
    };
    auto scan = [&](int i, int j, double xa, double xb) {
        for (int p = 0; p < native[i].first.nprobes; ++p) {
            double fa = native[i].first.probes[p];
            const double fb = native[j].first.probes[p];
            if (!(fa * fb < 0.0)) continue;
            double a = xa, b = xb;
            while (b - a > spec.split_tol) {
                const double mid = 0.5 * (a + b);
                const double fm = probe_at(mid, p);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            breaks.push_back(0.5 * (a + b));
        }
    };
    for (int i = 0; i + 1 < m; ++i) scan(i, i + 1, r0.nodes[i], r0.nodes[i + 1]);
    if (ax.periodic() && m > 1) scan(m - 1, 0, r0.nodes[m - 1], r0.nodes[0] + ax.length());

    std::vector<double> terms[kQuantities];
    if (breaks.empty()) {
        for (int i = 0; i < m; ++i)
            for (int q = 0; q < kQuantities; ++q)
                terms[q].push_back(r0.weights[i] * native[i].second * native[i].first.values[q]);
    } else {
        for (double& b : breaks)
            if (ax.periodic()) b = wrap_periodic(b, ax);
        std::sort(breaks.begin(), breaks.end());
        std::vector<double> merged;
        for (double b : breaks)
            if (merged.empty() || b - merged.back() > 1e-9) merged.push_back(b);
        if (ax.periodic() && merged.size() > 1 && merged.front() + ax.length() - merged.back() <= 1e-9) merged.pop_back();
        out.splits += merged.size();

        std::vector<std::pair<double, double>> pieces;
        if (ax.periodic()) {
            for (std::size_t j = 0; j < merged.size(); ++j) {
                const double lo = merged[j];
                const double hi = (j + 1 < merged.size()) ? merged[j + 1] : merged[0] + ax.length();
                pieces.emplace_back(lo, hi);
            }
        } else {
            double lo = ax.lo;
            for (double b : merged) {
                pieces.emplace_back(lo, b);
                lo = b;
            }
            pieces.emplace_back(lo, ax.hi);
        }
        for (const auto& [lo, hi] : pieces) {
            const double len = hi - lo;
            if (len <= 1e-14) continue;
            const int n = std::max(8, static_cast<int>(std::lround(m * len / ax.length())));
            const Rule1D r = gauss_legendre(n, lo, hi);
            for (int i = 0; i < n; ++i) {
                const auto s = eval(r.nodes[i]);
                for (int q = 0; q < kQuantities; ++q) terms[q].push_back(r.weights[i] * s.second * s.first.values[q]);
            }
        }
    }
    for (int q = 0; q < kQuantities; ++q) out.totals[q] = pairwise_sum(terms[q]);
    return out;
}

}  // namespace detail

/// Integrates each value of f against dv_M over the chart box.
inline BaseIntegral integrate_over_chart(const ParamChart& chart, const QuadratureSpec& spec, const BaseIntegrand& f) {
    spec.validate();
    const int s = chart.dim();
    std::vector<Rule1D> rules;
    for (const auto& a : chart.axes) rules.push_back(spec.rule_for(a));

    std::size_t columns = 1;
    for (int i = 1; i < s; ++i) columns *= rules[i].nodes.size();

    std::vector<detail::ColumnResult> results(columns);
    std::vector<double> outer_weight(columns, 1.0);
    parallel_for(columns, spec.threads, [&](std::size_t c) {
        Point u = Point::Zero(s);
        double w = 1.0;
        std::size_t rem = c;
        for (int i = 1; i < s; ++i) {
            const std::size_t n = rules[i].nodes.size();
            u[i] = rules[i].nodes[rem % n];
            w *= rules[i].weights[rem % n];
            rem /= n;
        }
        outer_weight[c] = w;
        results[c] = detail::integrate_column(chart, spec, f, u, rules[0]);
    });

    BaseIntegral out;
    std::vector<double> terms(columns);
    for (int q = 0; q < kQuantities; ++q) {
        for (std::size_t c = 0; c < columns; ++c) terms[c] = outer_weight[c] * results[c].totals[q];
        out.totals[q] = pairwise_sum(terms);
    }
    for (const auto& r : results) {
        out.min0 = std::min(out.min0, r.min0);
        out.max0 = std::max(out.max0, r.max0);
        out.evaluations += r.evaluations;
        out.splits += r.splits;
    }
    return out;
}

// ---------------------------------------------------------------------------
// curvature totals

struct SampleSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

/// Raw integrals over M; the signed, oriented entries need k = 2.
struct CurvatureTotals {
    double area = 0.0;
    double kstar_integral = 0.0;
    SampleSummary kstar;
    double gamma = 0.0;  // gamma_{n-1}
    bool oriented = false;
    double abs_plus = 0.0, abs_minus = 0.0;
    double signed_plus = 0.0, signed_minus = 0.0;
    double willmore_plus = 0.0, willmore_minus = 0.0;
    std::size_t evaluations = 0;
    std::size_t splits = 0;

    double tau() const { return kstar_integral / gamma; }
};

namespace detail {

enum Slot { kKStar, kAbsPlus, kAbsMinus, kSignedPlus, kSignedMinus, kHPlus2, kHMinus2, kArea };

inline BaseIntegrand curvature_integrand(const SubmanifoldModel& model, const FiberRule& rule) {
    const int k = model.codim();
    const int s = model.intrinsic_dim;
    const bool oriented = k == 2 && static_cast<bool>(model.outward);
    return [&model, &rule, k, s, oriented](const Jet2& jet) {
        BaseSample out;
        out.values[kArea] = 1.0;
        const MinkVector n_T = default_timelike_normal(jet);
        const NormalFrame frame = oriented ? oriented_frame(model, jet, n_T) : normal_frame_at(jet, n_T);
        if (k != 2) {
            out.values[kKStar] = pointwise_total_curvature(jet, frame, rule);
            return out;
        }
        const auto [g, g_inv] = first_fundamental(jet);
        const double det_g = g.determinant();
        for (int sign = 0; sign < 2; ++sign) {
            const MinkVector xi = sign == 0 ? frame.n_S[0] : -frame.n_S[0];
            const MinkVector ell = n_T + xi;
            SmallMatrix h(s, s);
            for (int i = 0; i < s; ++i)
                for (int j = i; j < s; ++j) h(i, j) = h(j, i) = pseudo_dot(ell, jet.duu(i, j));
            const double nh = nh_factor(n_T, xi);
            const double K = h.determinant() / det_g * std::pow(nh, s);
            const double H = (h * g_inv).trace() * nh / s;
            out.values[kAbsPlus + sign] = std::abs(K);
            out.values[kSignedPlus + sign] = K;
            out.values[kHPlus2 + sign] = H * H;
            out.probes[sign] = K;
        }
        out.nprobes = 2;
        out.values[kKStar] = out.values[kAbsPlus] + out.values[kAbsMinus];
        return out;
    };
}

}  // namespace detail

inline CurvatureTotals integrate_curvature(const SubmanifoldModel& model, const QuadratureSpec& spec) {
    if (!model.closed) throw std::invalid_argument("model " + model.name + " is not closed");
    const FiberRule rule = fiber_rule_for(model, spec);
    const BaseIntegral b = integrate_over_chart(model.covering_chart(), spec, detail::curvature_integrand(model, rule));
    CurvatureTotals t;
    using namespace detail;
    t.area = b.totals[kArea];
    t.kstar_integral = b.totals[kKStar];
    t.kstar = {b.min0, b.max0, t.kstar_integral / t.area};
    t.gamma = sphere_volume(model.n() - 1);
    t.oriented = model.codim() == 2 && static_cast<bool>(model.outward);
    t.abs_plus = b.totals[kAbsPlus];
    t.abs_minus = b.totals[kAbsMinus];
    t.signed_plus = b.totals[kSignedPlus];
    t.signed_minus = b.totals[kSignedMinus];
    t.willmore_plus = b.totals[kHPlus2];
    t.willmore_minus = b.totals[kHMinus2];
    t.evaluations = b.evaluations;
    t.splits = b.splits;
    return t;
}

/// tau_l = (1 / gamma_{n-1}) * integral of K*_l over M.
inline double total_absolute_curvature(const SubmanifoldModel& model, const QuadratureSpec& spec = {}) {
    return integrate_curvature(model, spec).tau();
}

struct Codim2Totals {
    double tau_plus = 0.0;
    double tau_minus = 0.0;
    double gauss_bonnet_lhs = 0.0;        // integral of K~+
    double gauss_bonnet_lhs_minus = 0.0;  // integral of K~-
    double abs_plus = 0.0;                // integral of |K~+|
    double abs_minus = 0.0;
};

inline Codim2Totals codim2_totals(const CurvatureTotals& t) {
    if (!t.oriented) throw std::invalid_argument("codimension-two totals need a model with a global n^S");
    return {t.abs_plus / t.gamma, t.abs_minus / t.gamma, t.signed_plus, t.signed_minus, t.abs_plus, t.abs_minus};
}

inline Codim2Totals codim2_totals(const SubmanifoldModel& model, const QuadratureSpec& spec = {}) {
    if (model.codim() != 2) throw std::invalid_argument("codim2_totals requires codimension two");
    if (!model.outward) throw std::invalid_argument("model " + model.name + " declares no global n^S");
    return codim2_totals(integrate_curvature(model, spec));
}

/// Integral of (H~+-)^2 over M; sign = +1 or -1.
inline double willmore_energy(const SubmanifoldModel& model, const QuadratureSpec& spec = {}, int sign = +1) {
    if (model.intrinsic_dim != 2 || model.codim() != 2)
        throw std::invalid_argument("willmore_energy requires a surface of codimension two");
    if (sign != 1 && sign != -1) throw std::invalid_argument("willmore_energy: sign must be +1 or -1");
    if (!model.outward) throw std::invalid_argument("model " + model.name + " declares no global n^S");
    const CurvatureTotals t = integrate_curvature(model, spec);
    return sign > 0 ? t.willmore_plus : t.willmore_minus;
}

// ---------------------------------------------------------------------------
// eta oracle

struct EtaEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    int used = 0;
    int flagged = 0;
    std::vector<int> counts;  // per draw, -1 when flagged
};

/// The d-th Monte-Carlo direction: uniform on the spatial unit sphere, lifted to S^{n-1}_+.
inline MinkVector mc_direction(int ambient_dim, std::uint64_t seed, std::uint64_t draw) {
    CounterRng rng(seed, draw);
    std::vector<double> w(ambient_dim - 1);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& x : w) {
            x = rng.normal();
            n2 += x * x;
        }
    } while (n2 < 1e-20);
    return lightcone_direction(std::span<const double>(w));
}

inline EtaEstimate tau_via_eta(const SubmanifoldModel& model, const QuadratureSpec& spec = {}) {
    if (!model.closed) throw std::invalid_argument("model " + model.name + " is not closed");
    spec.validate();
    const double diam = model_diameter(model);
    const CriticalSearchOptions opt = spec.search();
    EtaEstimate est;
    est.counts.assign(spec.mc_directions, -1);
    parallel_for(static_cast<std::size_t>(spec.mc_directions), spec.threads, [&](std::size_t d) {
        const MinkVector v = mc_direction(model.ambient_dim, spec.seed, d);
        const EtaCount e = eta_count(model, v, opt, diam);
        est.counts[d] = e.reliable ? e.count : -1;
    });
    std::vector<double> good;
    for (int c : est.counts) {
        if (c < 0) {
            ++est.flagged;
        } else {
            good.push_back(c);
        }
    }
    if (est.flagged > spec.mc_directions / 5)
        throw std::runtime_error("tau_via_eta: " + std::to_string(est.flagged) + " of " +
                                 std::to_string(spec.mc_directions) + " directions flagged degenerate");
    est.used = static_cast<int>(good.size());
    est.mean = pairwise_sum(good) / est.used;
    std::vector<double> dev;
    for (double g : good) dev.push_back((g - est.mean) * (g - est.mean));
    const double var = est.used > 1 ? pairwise_sum(dev) / (est.used - 1) : 0.0;
    est.stderr_ = std::sqrt(var / est.used);
    return est;
}

// ---------------------------------------------------------------------------
// report and verdicts

struct Verdict {
    std::string id;
    std::string description;
    std::optional<double> target;
    std::optional<double> measured;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string reason;
};

struct TotalCurvatureReport {
    std::string model;
    ParamMap params;
    std::optional<SampleSummary> K_star;
    std::optional<double> area;
    std::optional<double> tau_ell;
    std::optional<double> tau_plus, tau_minus;
    std::optional<double> abs_integral_plus, abs_integral_minus;
    std::optional<double> gauss_bonnet_lhs, gauss_bonnet_lhs_minus;
    std::optional<double> willmore_plus, willmore_minus;
    std::optional<EtaEstimate> eta;
    std::vector<Verdict> verdicts;
};

inline void fill_report(TotalCurvatureReport& rep, const SubmanifoldModel& model, const CurvatureTotals& t) {
    rep.K_star = t.kstar;
    rep.area = t.area;
    rep.tau_ell = t.tau();
    if (t.oriented) {
        const Codim2Totals c = codim2_totals(t);
        rep.tau_plus = c.tau_plus;
        rep.tau_minus = c.tau_minus;
        rep.abs_integral_plus = c.abs_plus;
        rep.abs_integral_minus = c.abs_minus;
        rep.gauss_bonnet_lhs = c.gauss_bonnet_lhs;
        rep.gauss_bonnet_lhs_minus = c.gauss_bonnet_lhs_minus;
        if (model.intrinsic_dim == 2) {
            rep.willmore_plus = t.willmore_plus;
            rep.willmore_minus = t.willmore_minus;
        }
    }
}

struct VerdictTolerances {
    double tau = 0.02;
    double gauss_bonnet_rel = 1e-4;  // times the integral of |K~|
    double bound_rel = 5e-3;
    double willmore_rel = 1e-3;
};

inline std::vector<Verdict> theorem_verdicts(const TotalCurvatureReport& rep, const SubmanifoldModel& model,
                                             const VerdictTolerances& tol = {}) {
    std::vector<Verdict> out;
    auto skip = [&](std::string id, std::string what, std::string why) {
        Verdict v;
        v.id = std::move(id);
        v.description = std::move(what);
        v.skipped = true;
        v.pass = true;
        v.reason = std::move(why);
        out.push_back(std::move(v));
    };
    auto check = [&](std::string id, std::string what, double target, double measured, double t, bool pass) {
        Verdict v;
        v.id = std::move(id);
        v.description = std::move(what);
        v.target = target;
        v.measured = measured;
        v.tolerance = t;
        v.pass = pass;
        out.push_back(std::move(v));
    };
    const double gamma = sphere_volume(model.n() - 1);
    const int k = model.codim();

    if (rep.tau_ell) {
        const double tau = *rep.tau_ell;
        if (model.morse_number) {
            check("chern-lashof", "tau_l >= gamma(M)", *model.morse_number, tau, tol.tau,
                  tau >= *model.morse_number - tol.tau);
        } else {
            skip("chern-lashof", "tau_l >= gamma(M)", "model declares no Morse number");
        }
        if (model.euler_characteristic) {
            const bool ok = tau >= 3.0 || model.sphere_topology();
            check("sphere-characterization", "tau_l < 3 implies the Euler characteristic of a sphere", 3.0, tau, 0.0,
                  ok);
        } else {
            skip("sphere-characterization", "tau_l < 3 implies a sphere", "model declares no Euler characteristic");
        }
    }

    if (k == 2) {
        if (!rep.tau_plus || !rep.tau_minus) {
            skip("embedded-projection-bound", "tau_l^+- >= 1", "no global n^S");
        } else if (!model.projection_embedded) {
            skip("embedded-projection-bound", "tau_l^+- >= 1", "projection to the spacelike hyperplane not declared embedded");
        } else {
            check("embedded-projection-bound+", "tau_l^+ >= 1", 1.0, *rep.tau_plus, tol.tau, *rep.tau_plus >= 1.0 - tol.tau);
            check("embedded-projection-bound-", "tau_l^- >= 1", 1.0, *rep.tau_minus, tol.tau,
                  *rep.tau_minus >= 1.0 - tol.tau);
        }

        if (!rep.gauss_bonnet_lhs || !model.euler_characteristic) {
            skip("gauss-bonnet", "integral of K~+- equals gamma chi / 2", "needs a global n^S and chi");
        } else if ((model.n() - 1) % 2 != 0) {
            skip("gauss-bonnet", "integral of K~+- equals gamma chi / 2", "n - 1 is odd");
        } else {
            const double target = 0.5 * gamma * *model.euler_characteristic;
            const double tp = tol.gauss_bonnet_rel * std::max(rep.abs_integral_plus.value_or(gamma), gamma);
            const double tm = tol.gauss_bonnet_rel * std::max(rep.abs_integral_minus.value_or(gamma), gamma);
            check("gauss-bonnet+", "integral of K~+ equals gamma chi / 2", target, *rep.gauss_bonnet_lhs, tp,
                  std::abs(*rep.gauss_bonnet_lhs - target) < tp);
            check("gauss-bonnet-", "integral of K~- equals gamma chi / 2", target, *rep.gauss_bonnet_lhs_minus, tm,
                  std::abs(*rep.gauss_bonnet_lhs_minus - target) < tm);
        }

        if (!rep.abs_integral_plus || !model.euler_characteristic) {
            skip("absolute-curvature-bound", "integral of |K~+-| >= gamma (4 - chi) / 2",
                 "needs the absolute integrals and chi");
        } else if (model.n() % 2 == 0) {
            skip("absolute-curvature-bound", "integral of |K~+-| >= gamma (4 - chi) / 2", "n is even");
        } else {
            const double bound = 0.5 * gamma * (4 - *model.euler_characteristic);
            const double t = tol.bound_rel * bound;
            check("absolute-curvature-bound+", "integral of |K~+| >= gamma (4 - chi) / 2", bound, *rep.abs_integral_plus,
                  t, *rep.abs_integral_plus >= bound - t);
            check("absolute-curvature-bound-", "integral of |K~-| >= gamma (4 - chi) / 2", bound,
                  *rep.abs_integral_minus, t, *rep.abs_integral_minus >= bound - t);
        }

        if (!rep.willmore_plus) {
            skip("willmore-bound", "integral of (H~+-)^2 >= 4 pi", "Willmore energy not computed");
        } else if (model.n() != 3) {
            skip("willmore-bound", "integral of (H~+-)^2 >= 4 pi", "needs a surface in R^4_1");
        } else {
            const double bound = 4.0 * std::numbers::pi;
            const double t = tol.willmore_rel * bound;
            check("willmore-bound+", "integral of (H~+)^2 >= 4 pi", bound, *rep.willmore_plus, t,
                  *rep.willmore_plus >= bound - t);
            check("willmore-bound-", "integral of (H~-)^2 >= 4 pi", bound, *rep.willmore_minus, t,
                  *rep.willmore_minus >= bound - t);
        }
    }

    if (rep.tau_ell && rep.eta) {
        const double t = 2.0 * rep.eta->stderr_ + tol.tau;
        check("eta-agreement", "tau_l agrees with the mean critical-point count", *rep.tau_ell, rep.eta->mean, t,
              std::abs(*rep.tau_ell - rep.eta->mean) <= t);
    }
    return out;
}

/// Per-node lightcone curvature values on the native grid of the covering chart:
/// chart, u_1..u_s, mu..., K_tilde, area_weight.
inline void write_curvature_csv(const SubmanifoldModel& model, const QuadratureSpec& spec, std::ostream& os) {
    spec.validate();
    const int ci = model.covering_chart_index();
    const ParamChart& chart = model.chart(ci);
    const int s = chart.dim();
    const FiberRule rule = fiber_rule_for(model, spec);
    const int k = model.codim();
    std::vector<Rule1D> rules;
    for (const auto& a : chart.axes) rules.push_back(spec.rule_for(a));

    os << "chart";
    for (int i = 1; i <= s; ++i) os << ",u_" << i;
    for (int j = 1; j <= rule.sphere_dim + 1; ++j) os << ",mu_" << j;
    os << ",K_tilde,area_weight\n";
    os.precision(17);

    std::vector<int> idx(s, 0);
    while (true) {
        Point u(s);
        double w = 1.0;
        for (int i = 0; i < s; ++i) {
            u[i] = rules[i].nodes[idx[i]];
            w *= rules[i].weights[idx[i]];
        }
        const Jet2 jet = chart.jet(u);
        const MinkVector n_T = default_timelike_normal(jet);
        const NormalFrame frame =
            (k == 2 && model.outward) ? oriented_frame(model, jet, n_T) : normal_frame_at(jet, n_T);
        const double aw = w * detail::area_element(jet);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const FiberPoint xi = fiber_direction(frame, rule.mu[q]);
            const FundamentalForms f = second_fundamental(jet, n_T, xi);
            const double nh = nh_factor(n_T, xi.xi);
            const double lk = std::pow(-nh, k - 2) * gauss_kronecker(f) * std::pow(nh, s);
            os << ci;
            for (int i = 0; i < s; ++i) os << ',' << u[i];
            for (double m : rule.mu[q]) os << ',' << m;
            os << ',' << lk << ',' << aw << '\n';
        }
        int d = 0;
        while (d < s && ++idx[d] == static_cast<int>(rules[d].nodes.size())) idx[d++] = 0;
        if (d == s) break;
    }
}

}  // namespace lightcone
