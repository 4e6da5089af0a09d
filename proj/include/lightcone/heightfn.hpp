// Lightcone height functions h_v(u) = <X(u), v> for v on S^{n-1}_+, their
// critical points, and the critical-point count eta(v).
#pragma once

#include "lightcone/curvature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightcone {

struct CriticalPoint {
    int chart_index = 0;
    Point u;
    MinkVector position;
    double value = 0.0;
    double gradient_norm = 0.0;
    int morse_index = 0;
    bool degenerate = false;
    double degeneracy_ratio = 0.0;  // |det| / |largest eigenvalue|^s of the intrinsic Hessian
    FiberPoint matched_xi;
    MinkVector n_T;
    SmallMatrix hessian;
};

struct CriticalSearchOptions {
    int grid_density = 64;
    double newton_tol = 1e-10;
    int max_iterations = 60;
    double degeneracy_threshold = 1e-6;
    double gradient_tol = 1e-9;
    double merge_distance = 1e-7;  // ambient, relative to max(1, model diameter)
};

struct CriticalSearchResult {
    std::vector<CriticalPoint> points;
    bool any_degenerate = false;
    bool ambiguous = false;
    int converged_seeds = 0;
    int seeds = 0;
    std::vector<std::string> warnings;

    bool reliable() const { return !any_degenerate && !ambiguous && !points.empty(); }
};

inline void require_lightcone_direction(const MinkVector& v, int dim) {
    if (v.dim() != dim) throw std::invalid_argument("direction has wrong dimension");
    if (!on_lightcone_sphere(v)) throw std::invalid_argument("direction must lie on S^{n-1}_+ (lightlike, v_0 = 1)");
}

/// Unit spatial direction w mapped to (1, w) on S^{n-1}_+.
inline MinkVector lightcone_direction(std::span<const double> w) {
    Coords c(static_cast<Eigen::Index>(w.size() + 1));
    double n2 = 0.0;
    for (double x : w) n2 += x * x;
    const double nrm = std::sqrt(n2);
    if (!(nrm > 0.0)) throw std::invalid_argument("lightcone_direction: zero spatial part");
    c[0] = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i) c[static_cast<Eigen::Index>(i + 1)] = w[i] / nrm;
    return MinkVector(c);
}

inline MinkVector lightcone_direction(std::initializer_list<double> w) {
    std::vector<double> v(w);
    return lightcone_direction(std::span<const double>(v));
}

inline double height(const SubmanifoldModel& model, int chart, const Point& u, const MinkVector& v) {
    require_lightcone_direction(v, model.ambient_dim);
    return pseudo_dot(evaluate_jet(model, chart, u).position(), v);
}

struct HeightDerivatives {
    Point gradient;
    SmallMatrix hessian;
};

inline HeightDerivatives height_derivatives(const Jet2& jet, const MinkVector& v) {
    const int s = jet.intrinsic_dim();
    HeightDerivatives d{Point(s), SmallMatrix(s, s)};
    for (int i = 0; i < s; ++i) {
        d.gradient[i] = pseudo_dot(jet.du(i), v);
        for (int j = i; j < s; ++j) d.hessian(i, j) = d.hessian(j, i) = pseudo_dot(jet.duu(i, j), v);
    }
    return d;
}

/// grad_i = <X_{u_i}, v>, Hess_ij = <X_{u_i u_j}, v>
inline HeightDerivatives height_gradient_hessian(const SubmanifoldModel& model, int chart, const Point& u,
                                                 const MinkVector& v) {
    require_lightcone_direction(v, model.ambient_dim);
    return height_derivatives(evaluate_jet(model, chart, u), v);
}

/// xi = -v / <n^T, v> - n^T: the fiber point whose normalized lightcone Gauss image is v.
inline MinkVector matched_fiber_vector(const MinkVector& n_T, const MinkVector& v) {
    const double nv = pseudo_dot(n_T, v);
    if (std::abs(nv) < kEll0Floor) throw std::domain_error("matched_fiber_vector: <n^T, v> vanishes");
    return (-1.0 / nv) * v - n_T;
}

namespace detail {

inline double chart_distance(const ParamChart& chart, const Point& a, const Point& b) {
    double d2 = 0.0;
    for (int i = 0; i < chart.dim(); ++i) {
        double d = std::abs(a[i] - b[i]);
        if (chart.axes[i].periodic()) d = std::min(d, chart.axes[i].length() - d);
        d2 += d * d;
    }
    return std::sqrt(d2);
}

inline bool inside(const ParamChart& chart, const Point& u, bool sampling_box) {
    for (int i = 0; i < chart.dim(); ++i) {
        const Axis a = sampling_box ? chart.sampling_axis(i) : chart.axes[i];
        if (!a.periodic() && (u[i] < a.lo || u[i] > a.hi)) return false;
    }
    return true;
}

inline Point wrap(const ParamChart& chart, Point u) {
    for (int i = 0; i < chart.dim(); ++i)
        if (chart.axes[i].periodic()) u[i] = wrap_periodic(u[i], chart.axes[i]);
    return u;
}

/// Damped Newton on the gradient of h_v. Returns the root when it converges inside the chart.
inline std::optional<Point> newton_critical(const ParamChart& chart, const MinkVector& v, Point u,
                                            const CriticalSearchOptions& opt) {
    const double max_step = 0.25 * chart.diameter();
    auto grad_at = [&](const Point& p) -> std::optional<HeightDerivatives> {
        if (!inside(chart, p, false)) return std::nullopt;
        return height_derivatives(chart.jet(wrap(chart, p)), v);
    };
    auto cur = grad_at(u);
    if (!cur) return std::nullopt;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const double gn = cur->gradient.norm();
        Eigen::FullPivLU<SmallMatrix> lu(cur->hessian);
        if (!lu.isInvertible()) return std::nullopt;
        Point step = lu.solve(-cur->gradient);
        if (step.norm() > max_step) step *= max_step / step.norm();
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt, t *= 0.5) {
            const Point trial = u + t * step;
            auto next = grad_at(trial);
            if (next && next->gradient.norm() < gn * (1.0 - 1e-4 * t)) {
                u = wrap(chart, trial);
                cur = next;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // no decrease possible: either converged to round-off or stuck
            return gn <= opt.gradient_tol ? std::optional<Point>(u) : std::nullopt;
        }
        if (t * step.norm() < opt.newton_tol) return u;
    }
    return cur->gradient.norm() <= opt.gradient_tol ? std::optional<Point>(u) : std::nullopt;
}

inline CriticalPoint classify(const SubmanifoldModel& model, int chart_index, const Point& u, const MinkVector& v,
                              const CriticalSearchOptions& opt) {
    const ParamChart& chart = model.chart(chart_index);
    const Jet2 jet = chart.jet(u);
    const HeightDerivatives d = height_derivatives(jet, v);
    const MetricPair metric = first_fundamental(jet);
    const int s = jet.intrinsic_dim();

    CriticalPoint cp;
    cp.chart_index = chart_index;
    cp.u = u;
    cp.position = jet.position();
    cp.value = pseudo_dot(jet.position(), v);
    cp.gradient_norm = d.gradient.norm();
    cp.hessian = d.hessian;
    const Point eig = principal_curvatures(d.hessian, metric.g);
    cp.morse_index = static_cast<int>((eig.array() < 0.0).count());
    const double largest = eig.cwiseAbs().maxCoeff();
    cp.degeneracy_ratio = largest > 0.0 ? eig.cwiseAbs().prod() / std::pow(largest, s) : 0.0;
    cp.degenerate = cp.degeneracy_ratio < opt.degeneracy_threshold;

    cp.n_T = default_timelike_normal(jet);
    const NormalFrame frame = normal_frame_at(jet, cp.n_T);
    const MinkVector xi = matched_fiber_vector(cp.n_T, v);
    std::vector<double> mu;
    for (const auto& e : frame.n_S) mu.push_back(pseudo_dot(xi, e));
    cp.matched_xi = FiberPoint{mu, xi};
    return cp;
}

}  // namespace detail

/// Critical points of h_v over every chart of a closed model, merged in ambient space.
inline CriticalSearchResult find_critical_points(const SubmanifoldModel& model, const MinkVector& v,
                                                 const CriticalSearchOptions& opt = {},
                                                 std::optional<double> diameter = std::nullopt) {
    if (!model.closed) throw std::invalid_argument("find_critical_points requires a closed model");
    require_lightcone_direction(v, model.ambient_dim);
    if (opt.grid_density < 4) throw std::invalid_argument("grid density too small");
    const double diam = diameter ? *diameter : model_diameter(model);
    const double merge = opt.merge_distance * std::max(1.0, diam);

    CriticalSearchResult res;
    for (int ci = 0; ci < static_cast<int>(model.charts.size()); ++ci) {
        const ParamChart& chart = model.charts[ci];
        const int s = chart.dim();
        const int N = opt.grid_density;

        // gradient norms on the sampling grid
        std::vector<double> gnorm;
        std::vector<Point> nodes;
        std::vector<int> idx(s, 0);
        int total = 1;
        for (int i = 0; i < s; ++i) total *= N;
        gnorm.reserve(total);
        nodes.reserve(total);
        for (int flat = 0; flat < total; ++flat) {
            Point u(s);
            for (int i = 0, rem = flat; i < s; ++i, rem /= N) {
                idx[i] = rem % N;
                const Axis a = chart.sampling_axis(i);
                u[i] = a.periodic() ? a.lo + a.length() * idx[i] / N : a.lo + a.length() * idx[i] / (N - 1);
            }
            nodes.push_back(u);
            gnorm.push_back(height_derivatives(chart.jet(u), v).gradient.norm());
        }

        auto neighbor = [&](int flat, int axis, int delta) -> int {
            int stride = 1;
            for (int i = 0; i < axis; ++i) stride *= N;
            const int c = (flat / stride) % N;
            int nc = c + delta;
            if (chart.axes[axis].periodic()) {
                nc = (nc + N) % N;
            } else if (nc < 0 || nc >= N) {
                return -1;
            }
            return flat + (nc - c) * stride;
        };

        std::vector<CriticalPoint> local;
        for (int flat = 0; flat < total; ++flat) {
            // local minimum of |grad| over the 3^s - 1 neighbours
            bool is_min = true;
            int offsets = 1;
            for (int i = 0; i < s; ++i) offsets *= 3;
            for (int o = 0; o < offsets && is_min; ++o) {
                int cur = flat;
                bool self = true;
                for (int i = 0, rem = o; i < s && cur >= 0; ++i, rem /= 3) {
                    const int d = rem % 3 - 1;
                    if (d != 0) {
                        self = false;
                        cur = neighbor(cur, i, d);
                    }
                }
                if (self || cur < 0) continue;
                if (gnorm[cur] < gnorm[flat]) is_min = false;
            }
            if (!is_min) continue;
            ++res.seeds;
            const auto root = detail::newton_critical(chart, v, nodes[flat], opt);
            if (!root) continue;
            ++res.converged_seeds;
            if (!detail::inside(chart, *root, true)) continue;

            const double radius = 10.0 * opt.newton_tol * chart.diameter();
            bool duplicate = false;
            for (const auto& other : local) {
                const double dist = detail::chart_distance(chart, other.u, *root);
                if (dist <= radius) {
                    duplicate = true;
                    break;
                }
                if (dist <= 2.0 * radius) res.ambiguous = true;
            }
            if (duplicate) continue;
            CriticalPoint cp = detail::classify(model, ci, *root, v, opt);
            if (cp.gradient_norm > opt.gradient_tol) continue;
            local.push_back(std::move(cp));
        }

        for (auto& cp : local) {
            bool duplicate = false;
            for (const auto& other : res.points) {
                const double dist = (other.position.coords() - cp.position.coords()).norm();
                if (dist <= merge) {
                    duplicate = true;
                    break;
                }
                if (dist <= 2.0 * merge) res.ambiguous = true;
            }
            if (!duplicate) res.points.push_back(std::move(cp));
        }
    }
    for (const auto& cp : res.points) res.any_degenerate = res.any_degenerate || cp.degenerate;
    if (res.points.empty()) res.warnings.push_back("Newton did not converge from any seed");
    if (res.ambiguous) res.warnings.push_back("two critical points within twice the clustering radius");
    if (res.any_degenerate) res.warnings.push_back("degenerate critical point: direction is not a regular value");
    return res;
}

/// Hess(h_v) - N_h(n^T, xi) h(n^T, xi) at a critical point, max-abs entry.
inline double hessian_identity_residual(const SubmanifoldModel& model, const CriticalPoint& cp, const MinkVector& v) {
    const Jet2 jet = model.chart(cp.chart_index).jet(cp.u);
    const HeightDerivatives d = height_derivatives(jet, v);
    const FundamentalForms f = second_fundamental(jet, cp.n_T, cp.matched_xi.xi);
    const double nh = nh_factor(cp.n_T, cp.matched_xi.xi);
    return (d.hessian - nh * f.h).cwiseAbs().maxCoeff();
}

struct EtaCount {
    int count = 0;
    bool reliable = false;
    std::vector<std::string> warnings;
};

/// Number of critical points of h_v; unreliable when v is not a regular value.
inline EtaCount eta_count(const SubmanifoldModel& model, const MinkVector& v, const CriticalSearchOptions& opt = {},
                          std::optional<double> diameter = std::nullopt) {
    const CriticalSearchResult r = find_critical_points(model, v, opt, diameter);
    return {static_cast<int>(r.points.size()), r.reliable(), r.warnings};
}

}  // namespace lightcone
