// Closed-form example submanifolds with analytic jets and topology metadata.
#pragma once

#include "lightcone/immersion.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightcone {

using ParamMap = std::map<std::string, double>;

namespace detail {

using Vec3 = Eigen::Vector3d;

/// A map F from a neighbourhood of the unit sphere S^2 into R^{n+1}_1 with its
/// first and second differentials; composed with spherical coordinates it
/// yields sphere-type charts.
struct SphereMap {
    std::function<MinkVector(const Vec3&)> value;
    std::function<MinkVector(const Vec3& w, const Vec3& a)> d1;
    std::function<MinkVector(const Vec3& w, const Vec3& a, const Vec3& b)> d2;
};

/// Lifts a spatial 3-vector into coordinates 1..3 of R^{dim}, time component t.
inline MinkVector lift(double t, const Vec3& x, int dim) {
    Coords c = Coords::Zero(dim);
    c[0] = t;
    c.segment<3>(1) = x;
    return MinkVector(c);
}

// Spherical coordinates (theta, phi) whose pole axis is e3 (rotation 0) or e1 (rotation 1).
inline Jet2 sphere_chart_jet(const SphereMap& F, int rotation, const Point& u) {
    const double th = u[0], ph = u[1];
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    Vec3 w(st * cp, st * sp, ct);
    Vec3 wt(ct * cp, ct * sp, -st);
    Vec3 wp(-st * sp, st * cp, 0.0);
    Vec3 wtt = -w;
    Vec3 wtp(-ct * sp, ct * cp, 0.0);
    Vec3 wpp(-st * cp, -st * sp, 0.0);
    if (rotation == 1) {
        auto rot = [](const Vec3& v) { return Vec3(v.z(), v.x(), v.y()); };
        w = rot(w), wt = rot(wt), wp = rot(wp), wtt = rot(wtt), wtp = rot(wtp), wpp = rot(wpp);
    }
    Jet2 jet(F.value(w), 2);
    jet.set_du(0, F.d1(w, wt));
    jet.set_du(1, F.d1(w, wp));
    jet.set_duu(0, 0, F.d2(w, wt, wt) + F.d1(w, wtt));
    jet.set_duu(0, 1, F.d2(w, wt, wp) + F.d1(w, wtp));
    jet.set_duu(1, 1, F.d2(w, wp, wp) + F.d1(w, wpp));
    return jet;
}

inline constexpr double kSphereMargin = 0.35;

inline std::vector<ParamChart> sphere_charts(SphereMap F) {
    std::vector<ParamChart> charts;
    for (int rot = 0; rot < 2; ++rot) {
        ParamChart c;
        c.axes = {Axis{0.0, std::numbers::pi, AxisKind::Polar}, Axis{0.0, 2.0 * std::numbers::pi, AxisKind::Periodic}};
        c.jet = [F, rot](const Point& u) { return sphere_chart_jet(F, rot, u); };
        c.pole_margin = kSphereMargin;
        c.covers = (rot == 0);
        charts.push_back(std::move(c));
    }
    return charts;
}

/// Unit radial spatial direction of the position.
inline MinkVector spatial_radial(const Jet2& jet) {
    Coords c = jet.position().coords();
    c[0] = 0.0;
    const double nrm = c.norm();
    if (nrm == 0.0) throw std::domain_error("radial direction undefined at the origin");
    return MinkVector(c / nrm);
}

inline double param(const ParamMap& p, const std::string& key) { return p.at(key); }

}  // namespace detail

/// Static description of a catalog entry: defaults, metadata, one-line summary.
struct CatalogEntry {
    std::string name;
    ParamMap defaults;
    std::string summary;
    std::function<SubmanifoldModel(const ParamMap&)> build;
};

inline SubmanifoldModel make_euclid_sphere(const ParamMap& p) {
    const double r = detail::param(p, "r");
    if (!(r > 0)) throw std::invalid_argument("euclid-sphere: r must be positive");
    detail::SphereMap F{
        [r](const detail::Vec3& w) { return detail::lift(0.0, r * w, 4); },
        [r](const detail::Vec3&, const detail::Vec3& a) { return detail::lift(0.0, r * a, 4); },
        [](const detail::Vec3&, const detail::Vec3&, const detail::Vec3&) { return MinkVector::zero(4); }};
    SubmanifoldModel m;
    m.name = "euclid-sphere";
    m.params = p;
    m.ambient_dim = 4;
    m.intrinsic_dim = 2;
    m.charts = detail::sphere_charts(F);
    m.euler_characteristic = 2;
    m.morse_number = 2;
    m.closed = true;
    m.projection_embedded = true;
    m.outward = detail::spatial_radial;
    m.description = "round sphere of radius r in the spacelike hyperplane x_0 = 0 of R^4_1";
    return m;
}

inline SubmanifoldModel make_torus(const ParamMap& p) {
    const double R = detail::param(p, "R"), r = detail::param(p, "r");
    if (!(R > r && r > 0)) throw std::invalid_argument("torus: need R > r > 0");
    ParamChart c;
    c.axes = {Axis{0.0, 2.0 * std::numbers::pi, AxisKind::Periodic}, Axis{0.0, 2.0 * std::numbers::pi, AxisKind::Periodic}};
    c.covers = true;
    c.jet = [R, r](const Point& u) {
        const double st = std::sin(u[0]), ct = std::cos(u[0]), sp = std::sin(u[1]), cp = std::cos(u[1]);
        const double rho = R + r * ct;
        Jet2 jet(MinkVector{0.0, rho * cp, rho * sp, r * st}, 2);
        jet.set_du(0, MinkVector{0.0, -r * st * cp, -r * st * sp, r * ct});
        jet.set_du(1, MinkVector{0.0, -rho * sp, rho * cp, 0.0});
        jet.set_duu(0, 0, MinkVector{0.0, -r * ct * cp, -r * ct * sp, -r * st});
        jet.set_duu(0, 1, MinkVector{0.0, r * st * sp, -r * st * cp, 0.0});
        jet.set_duu(1, 1, MinkVector{0.0, -rho * cp, -rho * sp, 0.0});
        return jet;
    };
    SubmanifoldModel m;
    m.name = "torus";
    m.params = p;
    m.ambient_dim = 4;
    m.intrinsic_dim = 2;
    m.charts = {c};
    m.euler_characteristic = 0;
    m.morse_number = 4;
    m.closed = true;
    m.projection_embedded = true;
    m.outward = [R, r](const Jet2& jet) {
        const auto& x = jet.position().coords();
        const double rho = std::hypot(x[1], x[2]);
        return MinkVector{0.0, (x[1] - R * x[1] / rho) / r, (x[2] - R * x[2] / rho) / r, x[3] / r};
    };
    m.description = "torus of revolution with radii R > r in x_0 = 0 of R^4_1";
    return m;
}

inline SubmanifoldModel make_lightcone_sphere(const ParamMap& p) {
    const double r = detail::param(p, "r");
    if (!(r > 0)) throw std::invalid_argument("lightcone-sphere: r must be positive");
    detail::SphereMap F{
        [r](const detail::Vec3& w) { return detail::lift(r, r * w, 4); },
        [r](const detail::Vec3&, const detail::Vec3& a) { return detail::lift(0.0, r * a, 4); },
        [](const detail::Vec3&, const detail::Vec3&, const detail::Vec3&) { return MinkVector::zero(4); }};
    SubmanifoldModel m;
    m.name = "lightcone-sphere";
    m.params = p;
    m.ambient_dim = 4;
    m.intrinsic_dim = 2;
    m.charts = detail::sphere_charts(F);
    m.euler_characteristic = 2;
    m.morse_number = 2;
    m.closed = true;
    m.projection_embedded = true;
    m.outward = detail::spatial_radial;
    m.description = "section r(1, w) of the future lightcone, totally umbilical";
    return m;
}

inline SubmanifoldModel make_bumpy_sphere(const ParamMap& p) {
    const double r = detail::param(p, "r"), eps = detail::param(p, "eps");
    if (!(r > 0) || !(std::abs(eps) < 1.0)) throw std::invalid_argument("bumpy-sphere: need r > 0, |eps| < 1");
    // rho(c) = r (1 + eps cos 3 theta) with c = cos theta, cos 3 theta = 4c^3 - 3c.
    auto rho = [r, eps](double c) { return r * (1.0 + eps * (4.0 * c * c * c - 3.0 * c)); };
    auto drho = [r, eps](double c) { return r * eps * (12.0 * c * c - 3.0); };
    auto ddrho = [r, eps](double c) { return r * eps * 24.0 * c; };
    detail::SphereMap F{
        [rho](const detail::Vec3& w) { return detail::lift(0.0, rho(w.z()) * w, 4); },
        [rho, drho](const detail::Vec3& w, const detail::Vec3& a) {
            return detail::lift(0.0, drho(w.z()) * a.z() * w + rho(w.z()) * a, 4);
        },
        [drho, ddrho](const detail::Vec3& w, const detail::Vec3& a, const detail::Vec3& b) {
            return detail::lift(0.0, ddrho(w.z()) * a.z() * b.z() * w + drho(w.z()) * (a.z() * b + b.z() * a), 4);
        }};
    SubmanifoldModel m;
    m.name = "bumpy-sphere";
    m.params = p;
    m.ambient_dim = 4;
    m.intrinsic_dim = 2;
    m.charts = detail::sphere_charts(F);
    m.euler_characteristic = 2;
    m.morse_number = 2;
    m.closed = true;
    m.projection_embedded = true;
    m.outward = detail::spatial_radial;
    m.description = "radial graph r(1 + eps cos 3 theta) over the round sphere in x_0 = 0";
    return m;
}

inline SubmanifoldModel make_hyperbolic_curve(const ParamMap& p) {
    const double a = detail::param(p, "a"), b = detail::param(p, "b");
    if (!(a > 0 && b > 0)) throw std::invalid_argument("hyperbolic-curve: need a, b > 0");
    ParamChart c;
    c.axes = {Axis{0.0, 2.0 * std::numbers::pi, AxisKind::Periodic}};
    c.covers = true;
    c.jet = [a, b](const Point& u) {
        const double t = u[0];
        const double x = a * std::cos(t), y = b * std::sin(t);
        const double x1 = -a * std::sin(t), y1 = b * std::cos(t);
        const double x2 = -x, y2 = -y;
        const double T = std::sqrt(1.0 + x * x + y * y);
        const double q = x * x1 + y * y1;
        const double T1 = q / T;
        const double T2 = (x1 * x1 + x * x2 + y1 * y1 + y * y2) / T - q * q / (T * T * T);
        Jet2 jet(MinkVector{T, x, y}, 1);
        jet.set_du(0, MinkVector{T1, x1, y1});
        jet.set_duu(0, 0, MinkVector{T2, x2, y2});
        return jet;
    };
    SubmanifoldModel m;
    m.name = "hyperbolic-curve";
    m.params = p;
    m.ambient_dim = 3;
    m.intrinsic_dim = 1;
    m.charts = {c};
    m.euler_characteristic = 0;
    m.morse_number = 2;
    m.closed = true;
    m.projection_embedded = true;
    m.outward = [a, b](const Jet2& jet) {
        const auto& x = jet.position().coords();
        const Eigen::Vector2d nrm = Eigen::Vector2d(x[1] / (a * a), x[2] / (b * b)).normalized();
        return MinkVector{0.0, nrm.x(), nrm.y()};
    };
    m.description = "closed curve over the ellipse (a cos t, b sin t) in the hyperbolic plane H^2(-1) of R^3_1";
    return m;
}

inline SubmanifoldModel make_codim3_sphere(const ParamMap& p) {
    const double r = detail::param(p, "r");
    if (!(r > 0)) throw std::invalid_argument("codim3-sphere: r must be positive");
    detail::SphereMap F{
        [r](const detail::Vec3& w) { return detail::lift(0.0, r * w, 5); },
        [r](const detail::Vec3&, const detail::Vec3& a) { return detail::lift(0.0, r * a, 5); },
        [](const detail::Vec3&, const detail::Vec3&, const detail::Vec3&) { return MinkVector::zero(5); }};
    SubmanifoldModel m;
    m.name = "codim3-sphere";
    m.params = p;
    m.ambient_dim = 5;
    m.intrinsic_dim = 2;
    m.charts = detail::sphere_charts(F);
    m.euler_characteristic = 2;
    m.morse_number = 2;
    m.closed = true;
    m.projection_embedded = false;
    m.outward = detail::spatial_radial;
    m.description = "round sphere in {x_0 = 0, x_4 = 0} of R^5_1 (fiber sphere S^1)";
    return m;
}

inline SubmanifoldModel make_lightlike_planar_patch(const ParamMap& p) {
    ParamChart c;
    c.axes = {Axis{-1.0, 1.0, AxisKind::Open}, Axis{-1.0, 1.0, AxisKind::Open}};
    c.covers = true;
    c.jet = [](const Point& u) {
        const double q = u[0] * u[0] + u[1] * u[1];
        Jet2 jet(MinkVector{q, q, u[0], u[1]}, 2);
        jet.set_du(0, MinkVector{2 * u[0], 2 * u[0], 1.0, 0.0});
        jet.set_du(1, MinkVector{2 * u[1], 2 * u[1], 0.0, 1.0});
        jet.set_duu(0, 0, MinkVector{2.0, 2.0, 0.0, 0.0});
        jet.set_duu(0, 1, MinkVector{0.0, 0.0, 0.0, 0.0});
        jet.set_duu(1, 1, MinkVector{2.0, 2.0, 0.0, 0.0});
        return jet;
    };
    SubmanifoldModel m;
    m.name = "lightlike-planar-patch";
    m.params = p;
    m.ambient_dim = 4;
    m.intrinsic_dim = 2;
    m.charts = {c};
    m.closed = false;
    m.flat_direction = MinkVector{1.0, 1.0, 0.0, 0.0};
    m.description = "open patch (|u|^2, |u|^2, u_1, u_2) inside the lightlike hyperplane HP((1,1,0,0), 0)";
    return m;
}

inline SubmanifoldModel make_flat_patch(const ParamMap& p) {
    ParamChart c;
    c.axes = {Axis{-1.0, 1.0, AxisKind::Open}, Axis{-1.0, 1.0, AxisKind::Open}};
    c.covers = true;
    c.jet = [](const Point& u) {
        Jet2 jet(MinkVector{0.0, u[0], u[1], 0.0}, 2);
        jet.set_du(0, MinkVector{0.0, 1.0, 0.0, 0.0});
        jet.set_du(1, MinkVector{0.0, 0.0, 1.0, 0.0});
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) jet.set_duu(i, j, MinkVector::zero(4));
        return jet;
    };
    SubmanifoldModel m;
    m.name = "flat-patch";
    m.params = p;
    m.ambient_dim = 4;
    m.intrinsic_dim = 2;
    m.charts = {c};
    m.closed = false;
    m.flat_direction = MinkVector{1.0, 0.0, 0.0, 1.0};
    m.description = "open affine patch (0, u_1, u_2, 0) of a spacelike plane";
    return m;
}

inline const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = {
        {"euclid-sphere", {{"r", 1.0}}, "round sphere in x_0 = 0", make_euclid_sphere},
        {"torus", {{"R", 2.0}, {"r", 1.0}}, "torus of revolution in x_0 = 0", make_torus},
        {"lightcone-sphere", {{"r", 1.0}}, "sphere section of the lightcone", make_lightcone_sphere},
        {"bumpy-sphere", {{"r", 1.0}, {"eps", 0.3}}, "non-convex radial graph over the sphere", make_bumpy_sphere},
        {"hyperbolic-curve", {{"a", 0.9}, {"b", 0.5}}, "closed curve in H^2(-1)", make_hyperbolic_curve},
        {"codim3-sphere", {{"r", 1.0}}, "round sphere with codimension 3", make_codim3_sphere},
        {"lightlike-planar-patch", {}, "open patch in a lightlike hyperplane", make_lightlike_planar_patch},
        {"flat-patch", {}, "open patch of a spacelike plane", make_flat_patch},
    };
    return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog_entries())
        if (e.name == name) return e;
    throw std::invalid_argument("unknown model: " + name);
}

/// Builds a catalog model; missing parameters take defaults, unknown ones are rejected.
inline SubmanifoldModel make_model(const std::string& name, const ParamMap& overrides = {}) {
    const CatalogEntry& e = catalog_entry(name);
    ParamMap p = e.defaults;
    for (const auto& [k, v] : overrides) {
        if (!p.contains(k)) throw std::invalid_argument("model " + name + " has no parameter '" + k + "'");
        if (!std::isfinite(v)) throw std::invalid_argument("parameter '" + k + "' must be finite");
        p[k] = v;
    }
    SubmanifoldModel m = e.build(p);
    m.validate();
    return m;
}

inline std::vector<SubmanifoldModel> builtin_catalog() {
    std::vector<SubmanifoldModel> out;
    for (const auto& e : catalog_entries()) out.push_back(make_model(e.name));
    return out;
}

}  // namespace lightcone
