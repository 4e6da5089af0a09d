// Pseudo-orthonormal normal frames {n^T, n^S_1, ..., n^S_{k-1}} and the fiber
// sphere of the unit normal bundle N_1(M)[n^T].
#pragma once

#include "lightcone/immersion.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace lightcone {

struct NormalFrame {
    MinkVector n_T;
    std::vector<MinkVector> n_S;  // k - 1 entries
};

struct FiberPoint {
    std::vector<double> mu;
    MinkVector xi;
};

inline constexpr double kFrameTol = 1e-10;
inline constexpr double kGramSchmidtDiscard = 1e-9;

/// Inverse of the first fundamental form at the jet.
inline SmallMatrix inverse_metric(const Jet2& jet) {
    const int s = jet.intrinsic_dim();
    SmallMatrix g(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) g(i, j) = g(j, i) = pseudo_dot(jet.du(i), jet.du(j));
    return g.inverse();
}

/// Removes the tangential component: x - sum g^{ij} <x, X_j> X_i.
inline MinkVector project_to_normal(const Jet2& jet, const SmallMatrix& g_inv, const MinkVector& x) {
    const int s = jet.intrinsic_dim();
    Point b(s);
    for (int j = 0; j < s; ++j) b[j] = pseudo_dot(x, jet.du(j));
    const Point c = g_inv * b;
    MinkVector out = x;
    for (int i = 0; i < s; ++i) out = out - c[i] * jet.du(i);
    return out;
}

inline MinkVector project_to_normal(const Jet2& jet, const MinkVector& x) {
    return project_to_normal(jet, inverse_metric(jet), x);
}

namespace detail {

inline MinkVector future_unit_timelike(const MinkVector& t, const char* what) {
    const double q = pseudo_dot(t, t);
    if (!(q < -kFrameTol * std::max(1.0, t.euclid_norm_sq())))
        throw std::domain_error(std::string(what) + ": normal projection is not timelike");
    MinkVector n = t / std::sqrt(-q);
    return n.time() < 0 ? -n : n;
}

}  // namespace detail

/// The normal projection of e_0, normalized and made future directed.
inline MinkVector default_timelike_normal(const Jet2& jet) {
    const MinkVector e0 = MinkVector::basis(jet.ambient_dim(), 0);
    const SmallMatrix g_inv = inverse_metric(jet);
    MinkVector t = project_to_normal(jet, g_inv, e0);
    // second pass removes round-off left by the first projection
    t = project_to_normal(jet, g_inv, t);
    return detail::future_unit_timelike(t, "default_timelike_normal");
}

/// Boosts the default n^T with rapidity alpha in the (x_0, x_axis) plane and re-projects to N_p.
inline MinkVector boosted_timelike_normal(const Jet2& jet, double rapidity, int axis) {
    const int dim = jet.ambient_dim();
    if (axis < 1 || axis >= dim) throw std::invalid_argument("boost axis must lie in [1, n]");
    const MinkVector base = default_timelike_normal(jet);
    Coords c = base.coords();
    const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
    const double x0 = c[0], xj = c[axis];
    c[0] = ch * x0 + sh * xj;
    c[axis] = sh * x0 + ch * xj;
    const SmallMatrix g_inv = inverse_metric(jet);
    MinkVector t = project_to_normal(jet, g_inv, MinkVector(c));
    t = project_to_normal(jet, g_inv, t);
    return detail::future_unit_timelike(t, "boosted_timelike_normal");
}

/// Gram-Schmidt over the seeds e_1, ..., e_n, e_0 inside n_T^perp of the normal space.
inline NormalFrame normal_frame_at(const Jet2& jet, const MinkVector& n_T) {
    const int dim = jet.ambient_dim();
    const int k = dim - jet.intrinsic_dim();
    const SmallMatrix g_inv = inverse_metric(jet);
    NormalFrame frame{n_T, {}};
    frame.n_S.reserve(k - 1);

    auto reduce = [&](MinkVector c) {
        c = project_to_normal(jet, g_inv, c);
        c = c + pseudo_dot(c, n_T) * n_T;
        for (const auto& e : frame.n_S) c = c - pseudo_dot(c, e) * e;
        return c;
    };

    for (int step = 0; step < dim && static_cast<int>(frame.n_S.size()) < k - 1; ++step) {
        const int seed = (step + 1) % dim;
        MinkVector c = reduce(reduce(MinkVector::basis(dim, seed)));
        const double q = pseudo_dot(c, c);
        if (!(q > 0.0) || std::sqrt(q) < kGramSchmidtDiscard) continue;
        frame.n_S.push_back(c / std::sqrt(q));
    }
    if (static_cast<int>(frame.n_S.size()) != k - 1)
        throw std::domain_error("normal_frame_at: could not complete the spacelike normal frame");
    return frame;
}

inline NormalFrame default_frame(const Jet2& jet) { return normal_frame_at(jet, default_timelike_normal(jet)); }

/// Codimension two only: flips n^S_1 so that it agrees with the model's outward hint.
inline NormalFrame oriented_frame(const SubmanifoldModel& model, const Jet2& jet, const MinkVector& n_T) {
    if (model.codim() != 2) throw std::invalid_argument("oriented_frame requires codimension two");
    if (!model.outward) throw std::invalid_argument("model " + model.name + " declares no global n^S");
    NormalFrame f = normal_frame_at(jet, n_T);
    if (pseudo_dot(f.n_S[0], model.outward(jet)) < 0.0) f.n_S[0] = -f.n_S[0];
    return f;
}

inline FiberPoint fiber_direction(const NormalFrame& frame, std::span<const double> mu) {
    if (mu.size() != frame.n_S.size()) throw std::invalid_argument("fiber_direction: mu has wrong length");
    double norm2 = 0.0;
    for (double m : mu) norm2 += m * m;
    if (std::abs(std::sqrt(norm2) - 1.0) > kFrameTol) throw std::invalid_argument("fiber_direction: mu is not a unit vector");
    MinkVector xi = MinkVector::zero(frame.n_T.dim());
    for (std::size_t j = 0; j < mu.size(); ++j) xi = xi + mu[j] * frame.n_S[j];
    return FiberPoint{std::vector<double>(mu.begin(), mu.end()), xi};
}

inline FiberPoint fiber_direction(const NormalFrame& frame, std::initializer_list<double> mu) {
    std::vector<double> v(mu);
    return fiber_direction(frame, std::span<const double>(v));
}

}  // namespace lightcone
