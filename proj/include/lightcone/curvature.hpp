// Pointwise lightcone curvatures at (p, xi): fundamental forms, shape
// operator, principal and Gauss-Kronecker curvatures, their normalized
// versions and the Lipschitz-Killing curvature of N_1(M)[n^T].
#pragma once

#include "lightcone/frames.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace lightcone {

struct FundamentalForms {
    SmallMatrix g;
    SmallMatrix g_inv;
    SmallMatrix h;
    double ell_0 = 0.0;

    int dim() const { return static_cast<int>(g.rows()); }
};

struct CurvatureSample {
    Point principal;             // kappa_i, ascending
    double K_ell = 0.0;          // det h / det g
    Point normalized_principal;  // kappa_i / ell_0
    double K_ell_normalized = 0.0;
    double lipschitz_killing = 0.0;
    double N_h = 0.0;
    double ell_0 = 0.0;
    std::optional<double> mean;  // codimension two only

    double umbilicity_spread() const {
        return normalized_principal.size() ? normalized_principal.maxCoeff() - normalized_principal.minCoeff() : 0.0;
    }
};

struct MetricPair {
    SmallMatrix g;
    SmallMatrix g_inv;
};

inline MetricPair first_fundamental(const Jet2& jet) {
    const int s = jet.intrinsic_dim();
    SmallMatrix g(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) g(i, j) = g(j, i) = pseudo_dot(jet.du(i), jet.du(j));
    const double det = g.determinant();
    const double scale = std::pow(g.trace() / s, s);
    if (!(det > 1e-12 * scale)) throw std::domain_error("first_fundamental: degenerate parametrization");
    return {g, g.inverse()};
}

/// h_ij = <n^T + xi, X_{u_i u_j}>, ell_0 = (n^T + xi)_0.
inline FundamentalForms second_fundamental(const Jet2& jet, const MinkVector& n_T, const MinkVector& xi) {
    const int s = jet.intrinsic_dim();
    auto [g, g_inv] = first_fundamental(jet);
    const MinkVector ell = n_T + xi;
    SmallMatrix h(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) h(i, j) = h(j, i) = pseudo_dot(ell, jet.duu(i, j));
    return {g, g_inv, h, ell.time()};
}

inline FundamentalForms second_fundamental(const Jet2& jet, const MinkVector& n_T, const FiberPoint& xi) {
    return second_fundamental(jet, n_T, xi.xi);
}

/// (h_i^j) = (h_ik)(g^kj)
inline SmallMatrix shape_operator(const FundamentalForms& f) { return f.h * f.g_inv; }

/// Eigenvalues of the pencil h x = kappa g x, ascending.
inline Point principal_curvatures(const SmallMatrix& h, const SmallMatrix& g) {
    if (h.rows() == 1) {
        Point k(1);
        k[0] = h(0, 0) / g(0, 0);
        return k;
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<SmallMatrix> solver(h, g, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("principal_curvatures: eigen-solver failure");
    return solver.eigenvalues();
}

inline Point principal_curvatures(const FundamentalForms& f) { return principal_curvatures(f.h, f.g); }

/// From a shape operator S = h g^{-1}: recovers the symmetric h = S g first.
inline Point principal_curvatures_from_shape(const SmallMatrix& S, const SmallMatrix& g) {
    SmallMatrix h = S * g;
    h = 0.5 * (h + h.transpose()).eval();
    return principal_curvatures(h, g);
}

inline double gauss_kronecker(const FundamentalForms& f) { return f.h.determinant() / f.g.determinant(); }

inline constexpr double kEll0Floor = 1e-12;

/// N_h(v, w) = 1 / (v_0 + w_0)
inline double nh_factor(const MinkVector& n_T, const MinkVector& xi) {
    const double ell0 = n_T.time() + xi.time();
    if (!(ell0 > kEll0Floor)) throw std::domain_error("nh_factor: ell_0 is not positive");
    return 1.0 / ell0;
}

struct NormalizedCurvatures {
    Point kappa;
    double K = 0.0;
};

inline NormalizedCurvatures normalized_curvatures(const Point& kappa, double K_ell, double ell_0) {
    if (!(ell_0 > 0.0)) throw std::domain_error("normalized_curvatures: ell_0 must be positive");
    return {kappa / ell_0, K_ell / std::pow(ell_0, static_cast<double>(kappa.size()))};
}

inline double mean_curvature_codim2(const Point& normalized_kappa) { return normalized_kappa.mean(); }

inline constexpr double kTwoPathTol = 1e-10;

namespace detail {

inline bool rel_close(double a, double b, double tol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= tol * scale;
}

}  // namespace detail

/// Both factorizations of the Lipschitz-Killing curvature of N_1(M)[n^T].
struct LipschitzKillingPaths {
    double factored = 0.0;     // (-N_h)^{k-2} * K~_ell
    double alternative = 0.0;  // (-1)^{k-2} N_h^{n-1} K_ell
};

inline LipschitzKillingPaths lipschitz_killing_paths(const Jet2& jet, const MinkVector& n_T, const MinkVector& xi) {
    const int s = jet.intrinsic_dim();
    const int n = jet.ambient_dim() - 1;
    const int k = jet.ambient_dim() - s;
    const FundamentalForms f = second_fundamental(jet, n_T, xi);
    const double nh = nh_factor(n_T, xi);
    const double K = gauss_kronecker(f);
    const double K_norm = K * std::pow(nh, s);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return {std::pow(-nh, k - 2) * K_norm, sign * std::pow(nh, n - 1) * K};
}

/// K~_ell(n^T)(p, xi); throws when the two factorizations disagree.
inline double lipschitz_killing(const Jet2& jet, const MinkVector& n_T, const MinkVector& xi) {
    const auto p = lipschitz_killing_paths(jet, n_T, xi);
    if (!detail::rel_close(p.factored, p.alternative, kTwoPathTol))
        throw std::logic_error("lipschitz_killing: factorizations disagree");
    return p.factored;
}

inline CurvatureSample curvature_sample(const Jet2& jet, const MinkVector& n_T, const MinkVector& xi) {
    const int s = jet.intrinsic_dim();
    const int k = jet.ambient_dim() - s;
    const FundamentalForms f = second_fundamental(jet, n_T, xi);
    CurvatureSample out;
    out.ell_0 = f.ell_0;
    out.N_h = nh_factor(n_T, xi);
    out.principal = principal_curvatures(f);
    out.K_ell = gauss_kronecker(f);
    const auto nc = normalized_curvatures(out.principal, out.K_ell, f.ell_0);
    out.normalized_principal = nc.kappa;
    out.K_ell_normalized = nc.K;
    out.lipschitz_killing = std::pow(-out.N_h, k - 2) * out.K_ell_normalized;
    const double alt = ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(out.N_h, jet.ambient_dim() - 2) * out.K_ell;
    if (!detail::rel_close(out.lipschitz_killing, alt, kTwoPathTol))
        throw std::logic_error("curvature_sample: Lipschitz-Killing factorizations disagree");
    if (k == 2) out.mean = mean_curvature_codim2(out.normalized_principal);
    return out;
}

struct FlatnessReport {
    MinkVector direction;
    double max_abs_h = 0.0;
    double gauss_map_spread = 0.0;       // max |LG~ - v| (Euclidean)
    double tangential_residual = 0.0;    // how far the section is from being normal
    int samples = 0;

    bool flat(double tol) const { return max_abs_h < tol && gauss_map_spread < tol; }
};

/// Normalized lightcone Gauss map under the section n^S = -v / <n^T, v> - n^T.
/// The section is projected to N_p and renormalized inside n_T^perp before use,
/// so for a submanifold outside every lightlike hyperplane the spread is O(1).
inline FlatnessReport flatness_probe(const SubmanifoldModel& model, std::span<const Point> samples,
                                     const MinkVector& v, int chart_index = 0) {
    if (!on_lightcone_sphere(v)) throw std::invalid_argument("flatness_probe: v must lie on S^{n-1}_+");
    FlatnessReport rep{v, 0.0, 0.0, 0.0, 0};
    const ParamChart& chart = model.chart(chart_index);
    for (const Point& u : samples) {
        const Jet2 jet = chart.jet(normalize_point(chart, u));
        const MinkVector n_T = default_timelike_normal(jet);
        const double nv = pseudo_dot(n_T, v);
        if (std::abs(nv) < kEll0Floor) throw std::domain_error("flatness_probe: <n^T, v> vanishes");
        const MinkVector section = (-1.0 / nv) * v - n_T;
        MinkVector xi = project_to_normal(jet, section);
        double tang = 0.0;
        for (int i = 0; i < jet.intrinsic_dim(); ++i)
            tang = std::max(tang, std::abs(pseudo_dot(section, jet.du(i))));
        xi = xi + pseudo_dot(xi, n_T) * n_T;
        const double q = pseudo_dot(xi, xi);
        if (!(q > 0.0)) throw std::domain_error("flatness_probe: section degenerates");
        xi = xi / std::sqrt(q);
        const MinkVector ell = n_T + xi;
        const MinkVector lg = ell / ell.time();
        const FundamentalForms f = second_fundamental(jet, n_T, xi);
        rep.max_abs_h = std::max(rep.max_abs_h, f.h.cwiseAbs().maxCoeff());
        rep.gauss_map_spread = std::max(rep.gauss_map_spread, (lg.coords() - v.coords()).norm());
        rep.tangential_residual = std::max(rep.tangential_residual, tang);
        ++rep.samples;
    }
    return rep;
}

}  // namespace lightcone
