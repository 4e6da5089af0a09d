// Lightlike convexity (tangent lightlike hyperplanes as support planes) and
// L-tightness verdicts for closed codimension-two models.
#pragma once

#include "lightcone/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lightcone {

/// HP(v^+, c^+) and HP(v^-, c^-) with v^+- = n^T +- n^S and c^+- = <f(p), v^+->.
inline std::pair<Hyperplane, Hyperplane> tangent_lightlike_hyperplanes(const SubmanifoldModel& model, int chart,
                                                                       const Point& u) {
    if (model.codim() != 2) throw std::invalid_argument("tangent lightlike hyperplanes need codimension two");
    const Jet2 jet = evaluate_jet(model, chart, u);
    const MinkVector n_T = default_timelike_normal(jet);
    const NormalFrame frame = model.outward ? oriented_frame(model, jet, n_T) : normal_frame_at(jet, n_T);
    const MinkVector vp = n_T + frame.n_S[0];
    const MinkVector vm = n_T - frame.n_S[0];
    return {Hyperplane(vp, pseudo_dot(jet.position(), vp)), Hyperplane(vm, pseudo_dot(jet.position(), vm))};
}

enum class Convexity { Convex, NonConvex, Inconclusive };

inline const char* to_string(Convexity c) {
    switch (c) {
        case Convexity::Convex: return "Convex";
        case Convexity::NonConvex: return "NonConvex";
        case Convexity::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ViolatingPair {
    Point base;
    int sign = +1;
    Point test;
    double violation = 0.0;
};

struct SupportReport {
    double worst_violation = 0.0;
    std::vector<ViolatingPair> violating_pairs;
    Convexity verdict = Convexity::Inconclusive;
    double tolerance = 0.0;
    int base_points = 0;
    int test_points = 0;
    bool coarse_warning = false;
    double curvature_spacing = 0.0;  // max |K~| times grid spacing
    std::string note;
};

struct ConvexityOptions {
    int density = 100;  // per axis, for both base and test points
    double tol = 1e-6;
    std::size_t max_pairs = 16;
    unsigned threads = 1;
};

namespace detail {

struct SupportSample {
    Point u;
    MinkVector x;
    MinkVector v_plus, v_minus;
    double max_abs_K = 0.0;
    double spacing = 0.0;
};

inline std::vector<SupportSample> support_samples(const SubmanifoldModel& model, int density) {
    const ParamChart& chart = model.covering_chart();
    const int s = chart.dim();
    std::vector<SupportSample> out;
    std::vector<int> idx(s, 0);
    while (true) {
        Point u(s);
        for (int i = 0; i < s; ++i) {
            const Axis& a = chart.axes[i];
            // cell centres keep clear of polar singularities
            u[i] = a.periodic() ? a.lo + a.length() * idx[i] / density : a.lo + a.length() * (idx[i] + 0.5) / density;
        }
        const Jet2 jet = chart.jet(u);
        const MinkVector n_T = default_timelike_normal(jet);
        const NormalFrame frame = model.outward ? oriented_frame(model, jet, n_T) : normal_frame_at(jet, n_T);
        SupportSample smp{u, jet.position(), n_T + frame.n_S[0], n_T - frame.n_S[0], 0.0, 0.0};
        const MetricPair metric = first_fundamental(jet);
        for (const MinkVector& xi : {frame.n_S[0], -frame.n_S[0]}) {
            const FundamentalForms f = second_fundamental(jet, n_T, xi);
            smp.max_abs_K = std::max(smp.max_abs_K, std::abs(gauss_kronecker(f) * std::pow(nh_factor(n_T, xi), s)));
        }
        for (int i = 0; i < s; ++i)
            smp.spacing = std::max(smp.spacing, std::sqrt(metric.g(i, i)) * chart.axes[i].length() / density);
        out.push_back(std::move(smp));
        int d = 0;
        while (d < s && ++idx[d] == density) idx[d++] = 0;
        if (d == s) break;
    }
    return out;
}

}  // namespace detail

/// Samples M and checks that each tangent lightlike hyperplane leaves every sample on one side.
inline SupportReport l_convexity_check(const SubmanifoldModel& model, const ConvexityOptions& opt = {}) {
    if (!model.closed) throw std::invalid_argument("convexity check requires a closed model");
    if (model.codim() != 2) throw std::invalid_argument("convexity check requires codimension two");
    if (opt.density < 4) throw std::invalid_argument("convexity sampling density too small");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("convexity tolerance must be positive");

    const auto samples = detail::support_samples(model, opt.density);
    double diam = 0.0;
    {
        // bounding-box diagonal is within sqrt(n+1) of the true diameter; use exact pairwise on a subsample
        const std::size_t stride = std::max<std::size_t>(1, samples.size() / 400);
        for (std::size_t a = 0; a < samples.size(); a += stride)
            for (std::size_t b = a + stride; b < samples.size(); b += stride)
                diam = std::max(diam, (samples[a].x.coords() - samples[b].x.coords()).norm());
    }
    if (!(diam > 0.0)) throw std::domain_error("convexity check: degenerate model diameter");

    SupportReport rep;
    rep.tolerance = opt.tol;
    rep.base_points = rep.test_points = static_cast<int>(samples.size());

    // straddle[p][sign] = min(max wrong side, max right side) / diameter
    std::vector<std::array<double, 2>> straddle(samples.size());
    std::vector<std::array<std::size_t, 2>> witness(samples.size());
    parallel_for(samples.size(), opt.threads, [&](std::size_t p) {
        for (int sg = 0; sg < 2; ++sg) {
            const MinkVector& v = sg == 0 ? samples[p].v_plus : samples[p].v_minus;
            const double c = pseudo_dot(samples[p].x, v);
            double up = 0.0, down = 0.0;
            std::size_t arg_up = p, arg_down = p;
            for (std::size_t q = 0; q < samples.size(); ++q) {
                const double d = pseudo_dot(samples[q].x, v) - c;
                if (d > up) up = d, arg_up = q;
                if (-d > down) down = -d, arg_down = q;
            }
            straddle[p][sg] = std::min(up, down) / diam;
            witness[p][sg] = up < down ? arg_up : arg_down;
        }
    });

    double max_k_spacing = 0.0;
    for (const auto& s : samples) max_k_spacing = std::max(max_k_spacing, s.max_abs_K * s.spacing);
    rep.curvature_spacing = max_k_spacing;
    rep.coarse_warning = max_k_spacing > 0.5;

    std::vector<ViolatingPair> pairs;
    for (std::size_t p = 0; p < samples.size(); ++p) {
        for (int sg = 0; sg < 2; ++sg) {
            rep.worst_violation = std::max(rep.worst_violation, straddle[p][sg]);
            if (straddle[p][sg] >= opt.tol)
                pairs.push_back({samples[p].u, sg == 0 ? +1 : -1, samples[witness[p][sg]].u, straddle[p][sg]});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const ViolatingPair& a, const ViolatingPair& b) { return a.violation > b.violation; });
    if (pairs.size() > opt.max_pairs) pairs.resize(opt.max_pairs);
    rep.violating_pairs = std::move(pairs);

    if (rep.coarse_warning) {
        rep.verdict = Convexity::Inconclusive;
        rep.note = "sampling too coarse for the curvature scale";
    } else {
        rep.verdict = rep.worst_violation < opt.tol ? Convexity::Convex : Convexity::NonConvex;
    }
    return rep;
}

enum class Tightness { Tight, NotTight, Inconclusive };

inline const char* to_string(Tightness t) {
    switch (t) {
        case Tightness::Tight: return "Tight";
        case Tightness::NotTight: return "NotTight";
        case Tightness::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct TightnessVerdict {
    Tightness verdict = Tightness::Inconclusive;
    double tau_ell = 0.0;
    double gamma = 0.0;
    double tau_tol = 0.0;
    std::string note;
};

/// Tight iff |tau_l - gamma(M)| <= tau_tol; sphere-type codimension-two models are
/// cross-checked against the convexity verdict when one is supplied.
inline TightnessVerdict l_tightness_verdict(const SubmanifoldModel& model, double tau_ell, double tau_tol = 0.02,
                                            const SupportReport* convexity = nullptr) {
    if (!model.morse_number) throw std::invalid_argument("model " + model.name + " declares no Morse number");
    if (!(tau_tol >= 0.0)) throw std::invalid_argument("tau tolerance must be non-negative");
    TightnessVerdict out;
    out.tau_ell = tau_ell;
    out.gamma = *model.morse_number;
    out.tau_tol = tau_tol;
    const bool tight = std::abs(tau_ell - out.gamma) <= tau_tol;
    out.verdict = tight ? Tightness::Tight : Tightness::NotTight;

    if (model.codim() != 2) {
        out.note = "convexity is only defined in codimension two; verdict rests on tau_l alone";
        return out;
    }
    if (model.projection_embedded && model.n() % 2 == 1)
        out.note = "model declares an embedded spacelike projection: tight spheres also satisfy tau^+ = tau^- = 1";
    if (convexity && model.sphere_topology()) {
        if (convexity->verdict == Convexity::Inconclusive) {
            out.verdict = Tightness::Inconclusive;
            out.note = "convexity check inconclusive";
        } else if ((convexity->verdict == Convexity::Convex) != tight) {
            out.verdict = Tightness::Inconclusive;
            out.note = std::string("tau_l and the convexity check disagree (") + to_string(convexity->verdict) + ")";
        }
    }
    return out;
}

}  // namespace lightcone
