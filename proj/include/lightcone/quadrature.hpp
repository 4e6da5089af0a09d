// Quadrature rules, fiber-sphere rules, deterministic reductions and a small
// fixed-partition thread pool.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

namespace lightcone {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// (P_m(x), P_m'(x)) by the three-term recurrence.
inline std::pair<double, double> legendre(int m, double x) {
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    return {p1, m * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace detail

/// Gauss-Legendre rule on [lo, hi] (Newton iteration on P_m from Chebyshev-like guesses).
inline Rule1D gauss_legendre(int m, double lo, double hi) {
    if (m < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    Rule1D r;
    r.nodes.resize(m);
    r.weights.resize(m);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = detail::legendre(m, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = detail::legendre(m, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = mid - half * x;
        r.nodes[m - 1 - i] = mid + half * x;
        r.weights[i] = r.weights[m - 1 - i] = half * w;
    }
    return r;
}

/// Trapezoid rule for a periodic integrand on [lo, lo + period).
inline Rule1D periodic_trapezoid(int m, double lo, double period) {
    if (m < 1) throw std::invalid_argument("periodic_trapezoid: need at least one node");
    Rule1D r;
    for (int i = 0; i < m; ++i) {
        r.nodes.push_back(lo + period * i / m);
        r.weights.push_back(period / m);
    }
    return r;
}

/// gamma_m: volume of the unit m-sphere; gamma_0 = 2 (counting measure on S^0).
inline double sphere_volume(int m) {
    if (m < 0) throw std::invalid_argument("sphere_volume: m must be non-negative");
    const double a = 0.5 * (m + 1);
    return 2.0 * std::pow(std::numbers::pi, a) / std::tgamma(a);
}

/// Nodes (unit vectors mu in R^{m+1}) and weights of a rule on S^m.
struct FiberRule {
    int sphere_dim = 0;
    std::vector<std::vector<double>> mu;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// S^0: counting measure on {+1, -1}. S^1: trapezoid. S^m: product polar rule in
/// hyperspherical coordinates (Gauss-Legendre in each polar angle).
inline FiberRule make_fiber_rule(int m, int nodes) {
    if (m < 0) throw std::invalid_argument("fiber rule: negative sphere dimension");
    FiberRule rule;
    rule.sphere_dim = m;
    if (m == 0) {
        rule.mu = {{1.0}, {-1.0}};
        rule.weights = {1.0, 1.0};
        return rule;
    }
    if (nodes < 8) throw std::invalid_argument("fiber rule: need at least 8 nodes per axis");
    const Rule1D azimuth = periodic_trapezoid(nodes, 0.0, 2.0 * std::numbers::pi);
    const Rule1D polar = gauss_legendre(std::max(8, nodes / 2), 0.0, std::numbers::pi);
    // angles theta_1..theta_{m-1} polar, theta_m azimuthal
    std::vector<int> idx(m, 0);
    while (true) {
        std::vector<double> mu(m + 1);
        double w = 1.0, sin_prod = 1.0;
        for (int a = 0; a < m - 1; ++a) {
            const double th = polar.nodes[idx[a]];
            mu[a] = sin_prod * std::cos(th);
            w *= polar.weights[idx[a]] * std::pow(std::sin(th), m - 1 - a);
            sin_prod *= std::sin(th);
        }
        const double ph = azimuth.nodes[idx[m - 1]];
        mu[m - 1] = sin_prod * std::cos(ph);
        mu[m] = sin_prod * std::sin(ph);
        w *= azimuth.weights[idx[m - 1]];
        rule.mu.push_back(std::move(mu));
        rule.weights.push_back(w);
        int d = 0;
        while (d < m) {
            const int lim = (d == m - 1) ? nodes : static_cast<int>(polar.nodes.size());
            if (++idx[d] < lim) break;
            idx[d++] = 0;
        }
        if (d == m) break;
    }
    return rule;
}

/// Pairwise summation in index order; independent of how the terms were produced.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t h = x.size() / 2;
    return pairwise_sum(x.first(h)) + pairwise_sum(x.subspan(h));
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to per-index slots; exceptions are rethrown on the caller.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Counter-based generator: the k-th draw depends only on (seed, stream, k).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

    std::uint64_t next() { return mix(state_ += 0x9e3779b97f4a7c15ULL); }

    /// Uniform in (0, 1).
    double uniform() { return ((next() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        const double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace lightcone
