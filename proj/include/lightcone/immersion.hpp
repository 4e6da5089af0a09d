// Spacelike immersions X: U -> R^{n+1}_1 described chart by chart through
// analytic second-order jets.
#pragma once

#include "lightcone/minkowski.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightcone {

inline constexpr int kMaxIntrinsic = 4;

using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxIntrinsic, 1>;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxIntrinsic, kMaxIntrinsic>;

/// Position, first and second partials of X at a parameter point.
class Jet2 {
public:
    Jet2() = default;

    Jet2(MinkVector position, int s) : position_(std::move(position)), s_(s) {
        if (s < 1 || s > kMaxIntrinsic) throw std::invalid_argument("Jet2: intrinsic dimension out of range");
    }

    int intrinsic_dim() const { return s_; }
    int ambient_dim() const { return position_.dim(); }

    const MinkVector& position() const { return position_; }
    const MinkVector& du(int i) const { return first_[i]; }
    /// X_{u_i u_j}; stored once per unordered pair.
    const MinkVector& duu(int i, int j) const { return second_[pair_index(i, j)]; }

    void set_du(int i, MinkVector v) { first_[i] = std::move(v); }
    void set_duu(int i, int j, MinkVector v) { second_[pair_index(i, j)] = std::move(v); }

private:
    static int pair_index(int i, int j) {
        if (i > j) std::swap(i, j);
        return i * kMaxIntrinsic + j;
    }

    MinkVector position_;
    int s_ = 0;
    std::array<MinkVector, kMaxIntrinsic> first_{};
    std::array<MinkVector, kMaxIntrinsic * kMaxIntrinsic> second_{};
};

enum class AxisKind {
    Periodic,  // trapezoid rule, wraps around
    Polar,     // coordinate singularity at both ends, Gauss-Legendre
    Open,      // plain bounded interval, Gauss-Legendre
};

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    AxisKind kind = AxisKind::Open;

    double length() const { return hi - lo; }
    bool periodic() const { return kind == AxisKind::Periodic; }
};

using JetFn = std::function<Jet2(const Point&)>;

struct ParamChart {
    std::vector<Axis> axes;
    JetFn jet;
    /// Shrinks non-periodic axes for point sampling near coordinate singularities.
    double pole_margin = 0.0;
    /// Chart covers M up to measure zero; used for quadrature.
    bool covers = false;

    int dim() const { return static_cast<int>(axes.size()); }

    double diameter() const {
        double d2 = 0.0;
        for (const auto& a : axes) d2 += a.length() * a.length();
        return std::sqrt(d2);
    }

    /// Sampling box: non-periodic axes shrunk by the pole margin.
    Axis sampling_axis(int i) const {
        Axis a = axes[i];
        if (!a.periodic()) {
            a.lo += pole_margin;
            a.hi -= pole_margin;
        }
        return a;
    }
};

/// Spacelike unit normal hint used to orient the codimension-two normal n^S.
using OrientationFn = std::function<MinkVector(const Jet2&)>;

struct SubmanifoldModel {
    std::string name;
    std::map<std::string, double> params;
    int ambient_dim = 0;    // n + 1
    int intrinsic_dim = 0;  // s
    std::vector<ParamChart> charts;
    std::optional<int> euler_characteristic;
    std::optional<int> morse_number;
    bool closed = false;
    /// pi o f (drop the time coordinate) is an embedding.
    bool projection_embedded = false;
    OrientationFn outward;
    /// Candidate constant lightcone Gauss direction for the flatness probe.
    std::optional<MinkVector> flat_direction;
    std::string description;

    int n() const { return ambient_dim - 1; }
    int codim() const { return ambient_dim - intrinsic_dim; }
    /// Dimension of the fiber sphere of the unit normal bundle N_1(M)[n^T].
    int fiber_dim() const { return codim() - 2; }
    bool sphere_topology() const {
        return euler_characteristic && *euler_characteristic == 1 + (intrinsic_dim % 2 == 0 ? 1 : -1);
    }

    const ParamChart& chart(int i) const {
        if (i < 0 || i >= static_cast<int>(charts.size())) throw std::out_of_range("chart index out of range");
        return charts[i];
    }

    const ParamChart& covering_chart() const {
        for (const auto& c : charts)
            if (c.covers) return c;
        throw std::logic_error("model " + name + " has no covering chart");
    }

    int covering_chart_index() const {
        for (int i = 0; i < static_cast<int>(charts.size()); ++i)
            if (charts[i].covers) return i;
        throw std::logic_error("model " + name + " has no covering chart");
    }

    void validate() const {
        if (intrinsic_dim < 1 || intrinsic_dim > kMaxIntrinsic) throw std::invalid_argument("bad intrinsic dim");
        if (codim() < 1) throw std::invalid_argument("s + k must equal n + 1 with k >= 1");
        if (closed && (!euler_characteristic || !morse_number))
            throw std::invalid_argument("closed model " + name + " must declare chi and Morse number");
        for (const auto& c : charts)
            if (c.dim() != intrinsic_dim) throw std::invalid_argument("chart dimension mismatch in " + name);
    }
};

namespace detail {

inline double wrap_periodic(double x, const Axis& a) {
    const double L = a.length();
    double y = std::fmod(x - a.lo, L);
    if (y < 0) y += L;
    return a.lo + y;
}

inline void check_spacelike(const Jet2& jet) {
    const int s = jet.intrinsic_dim();
    SmallMatrix g(s, s);
    double trace = 0.0;
    for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j) g(i, j) = g(j, i) = pseudo_dot(jet.du(i), jet.du(j));
        trace += g(i, i);
    }
    for (int i = 0; i < s; ++i)
        if (!(g(i, i) > 0.0)) throw std::domain_error("jet has a non-spacelike tangent vector");
    const double scale = std::pow(trace / s, s);
    if (!(g.determinant() > 1e-14 * scale)) throw std::domain_error("jet tangent Gram matrix is not positive definite");
}

}  // namespace detail

inline Point normalize_point(const ParamChart& chart, const Point& u, double slack = 1e-12) {
    if (u.size() != chart.dim()) throw std::invalid_argument("parameter point has wrong dimension");
    Point w = u;
    for (int i = 0; i < chart.dim(); ++i) {
        const Axis& a = chart.axes[i];
        if (!std::isfinite(u[i])) throw std::domain_error("non-finite parameter");
        if (a.periodic()) {
            w[i] = detail::wrap_periodic(u[i], a);
        } else if (u[i] < a.lo - slack || u[i] > a.hi + slack) {
            throw std::domain_error("parameter point outside chart domain");
        }
    }
    return w;
}

/// Analytic jet of the model at u, checked for spacelike tangents.
inline Jet2 evaluate_jet(const SubmanifoldModel& model, int chart_index, const Point& u) {
    const ParamChart& chart = model.chart(chart_index);
    Jet2 jet = chart.jet(normalize_point(chart, u));
    detail::check_spacelike(jet);
    return jet;
}

/// Central-difference jet of the position map; a test oracle for the analytic jets.
inline Jet2 finite_difference_jet(const SubmanifoldModel& model, int chart_index, const Point& u, double h) {
    const ParamChart& chart = model.chart(chart_index);
    const int s = chart.dim();
    if (u.size() != s) throw std::invalid_argument("parameter point has wrong dimension");
    if (!(h > 0.0)) throw std::invalid_argument("finite difference step must be positive");
    for (int i = 0; i < s; ++i) {
        const Axis& a = chart.axes[i];
        if (a.periodic()) {
            if (4.0 * h >= a.length()) throw std::domain_error("step too large for domain");
        } else if (u[i] - 2.0 * h < a.lo || u[i] + 2.0 * h > a.hi) {
            throw std::domain_error("step too large for domain: point within 2h of the boundary");
        }
    }
    auto X = [&](const Point& p) { return chart.jet(normalize_point(chart, p)).position(); };

    Jet2 out(X(u), s);
    const MinkVector x0 = out.position();
    for (int i = 0; i < s; ++i) {
        Point up = u, um = u;
        up[i] += h;
        um[i] -= h;
        const MinkVector xp = X(up), xm = X(um);
        out.set_du(i, (xp - xm) / (2.0 * h));
        out.set_duu(i, i, (xp - 2.0 * x0 + xm) / (h * h));
        for (int j = i + 1; j < s; ++j) {
            Point pp = u, pm = u, mp = u, mm = u;
            pp[i] += h, pp[j] += h;
            pm[i] += h, pm[j] -= h;
            mp[i] -= h, mp[j] += h;
            mm[i] -= h, mm[j] -= h;
            out.set_duu(i, j, (X(pp) - X(pm) - X(mp) + X(mm)) / (4.0 * h * h));
        }
    }
    return out;
}

/// Largest Euclidean distance between sampled points of the covering chart.
inline double model_diameter(const SubmanifoldModel& model, int per_axis = 24) {
    const ParamChart& chart = model.covering_chart();
    const int s = chart.dim();
    std::vector<MinkVector> pts;
    std::vector<int> idx(s, 0);
    while (true) {
        Point u(s);
        for (int i = 0; i < s; ++i) {
            const Axis a = chart.sampling_axis(i);
            u[i] = a.periodic() ? a.lo + a.length() * idx[i] / per_axis
                                : a.lo + a.length() * idx[i] / (per_axis - 1);
        }
        pts.push_back(chart.jet(u).position());
        int d = 0;
        while (d < s && ++idx[d] == per_axis) idx[d++] = 0;
        if (d == s) break;
    }
    double best = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            best = std::max(best, (pts[a].coords() - pts[b].coords()).norm());
    return best;
}

}  // namespace lightcone
