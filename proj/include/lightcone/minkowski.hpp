// Linear algebra of Lorentz-Minkowski space R^{n+1}_1.
//
// Vectors carry a runtime dimension (index 0 is the time component). Storage
// is an Eigen vector with a fixed upper bound, so values never touch the heap.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightcone {

inline constexpr int kMaxAmbient = 8;

using Coords = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxAmbient, 1>;

class MinkVector {
public:
    MinkVector() = default;

    explicit MinkVector(const Coords& c) : c_(c) { validate(); }

    MinkVector(std::initializer_list<double> values) : c_(static_cast<Eigen::Index>(values.size())) {
        Eigen::Index i = 0;
        for (double v : values) c_[i++] = v;
        validate();
    }

    static MinkVector zero(int dim) {
        check_dim(dim);
        return MinkVector(Coords::Zero(dim));
    }

    static MinkVector basis(int dim, int i) {
        check_dim(dim);
        if (i < 0 || i >= dim) throw std::out_of_range("basis index out of range");
        Coords c = Coords::Zero(dim);
        c[i] = 1.0;
        return MinkVector(c);
    }

    int dim() const { return static_cast<int>(c_.size()); }
    bool empty() const { return c_.size() == 0; }
    double operator[](int i) const { return c_[i]; }
    double time() const { return c_[0]; }
    const Coords& coords() const { return c_; }

    /// Squared norm of the coordinate vector in the Euclidean sense.
    double euclid_norm_sq() const { return c_.squaredNorm(); }

    MinkVector operator-() const { return from_raw(-c_); }

    friend MinkVector operator+(const MinkVector& a, const MinkVector& b) {
        same_dim(a, b);
        return from_raw(a.c_ + b.c_);
    }
    friend MinkVector operator-(const MinkVector& a, const MinkVector& b) {
        same_dim(a, b);
        return from_raw(a.c_ - b.c_);
    }
    friend MinkVector operator*(double s, const MinkVector& a) { return from_raw(s * a.c_); }
    friend MinkVector operator*(const MinkVector& a, double s) { return from_raw(s * a.c_); }
    friend MinkVector operator/(const MinkVector& a, double s) { return from_raw(a.c_ / s); }

    static void same_dim(const MinkVector& a, const MinkVector& b) {
        if (a.dim() != b.dim())
            throw std::invalid_argument("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                        std::to_string(b.dim()));
    }

private:
    static MinkVector from_raw(const Coords& c) {
        MinkVector v;
        v.c_ = c;
        return v;
    }

    static void check_dim(int dim) {
        if (dim < 3 || dim > kMaxAmbient)
            throw std::invalid_argument("ambient dimension must lie in [3, " + std::to_string(kMaxAmbient) + "]");
    }

    void validate() const {
        check_dim(dim());
        if (!c_.allFinite()) throw std::invalid_argument("MinkVector has non-finite components");
    }

    Coords c_;
};

/// <x, y> = -x_0 y_0 + sum_{i>=1} x_i y_i
inline double pseudo_dot(const MinkVector& x, const MinkVector& y) {
    MinkVector::same_dim(x, y);
    const auto& a = x.coords();
    const auto& b = y.coords();
    const Eigen::Index n = a.size();
    return -a[0] * b[0] + a.tail(n - 1).dot(b.tail(n - 1));
}

inline double mink_norm(const MinkVector& x) { return std::sqrt(std::abs(pseudo_dot(x, x))); }

enum class CausalClass { Spacelike, Timelike, Lightlike, Zero };

inline const char* to_string(CausalClass c) {
    switch (c) {
        case CausalClass::Spacelike: return "spacelike";
        case CausalClass::Timelike: return "timelike";
        case CausalClass::Lightlike: return "lightlike";
        case CausalClass::Zero: return "zero";
    }
    return "?";
}

inline constexpr double kCausalTol = 1e-10;

// |<x,x>| <= tol * max(1, |x|^2_E) counts as lightlike.
inline CausalClass causal_class(const MinkVector& x, double tol = kCausalTol) {
    if (!(tol > 0.0)) throw std::invalid_argument("causal_class: tol must be positive");
    const double e2 = x.euclid_norm_sq();
    if (std::sqrt(e2) <= tol) return CausalClass::Zero;
    const double q = pseudo_dot(x, x);
    if (std::abs(q) <= tol * std::max(1.0, e2)) return CausalClass::Lightlike;
    return q > 0.0 ? CausalClass::Spacelike : CausalClass::Timelike;
}

namespace detail {

using SquareMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxAmbient, kMaxAmbient>;

inline double det_laplace(const SquareMatrix& m) {
    const Eigen::Index n = m.rows();
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double det = 0.0;
    double sign = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        SquareMatrix minor(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r)
            for (Eigen::Index c = 0, cc = 0; c < n; ++c)
                if (c != j) minor(r - 1, cc++) = m(r, c);
        det += sign * m(0, j) * det_laplace(minor);
        sign = -sign;
    }
    return det;
}

inline double det_lu(const SquareMatrix& m) { return m.partialPivLu().determinant(); }

enum class MinorMethod { Auto, Cofactor, LU };

}  // namespace detail

/// Lorentzian cross product of n vectors in R^{n+1}_1: the formal determinant
/// with first row (-e_0, e_1, ..., e_n). Satisfies <x, wedge(x_1..x_n)> = det(x, x_1, ..., x_n).
inline MinkVector wedge(std::span<const MinkVector> xs,
                        detail::MinorMethod method = detail::MinorMethod::Auto) {
    if (xs.empty()) throw std::invalid_argument("wedge: empty argument list");
    const int dim = xs[0].dim();
    const int n = dim - 1;
    if (static_cast<int>(xs.size()) != n)
        throw std::invalid_argument("wedge: expected " + std::to_string(n) + " vectors of dimension " +
                                    std::to_string(dim));
    for (const auto& x : xs)
        if (x.dim() != dim) throw std::invalid_argument("wedge: dimension mismatch");

    const bool cofactor =
        method == detail::MinorMethod::Cofactor || (method == detail::MinorMethod::Auto && n <= 4);
    Coords out(dim);
    for (int j = 0; j < dim; ++j) {
        detail::SquareMatrix minor(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0, cc = 0; c < dim; ++c)
                if (c != j) minor(r, cc++) = xs[r][c];
        const double m = cofactor ? detail::det_laplace(minor) : detail::det_lu(minor);
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        out[j] = (j == 0 ? -1.0 : sign) * m;
    }
    return MinkVector(out);
}

inline MinkVector wedge(std::initializer_list<MinkVector> xs) {
    std::vector<MinkVector> v(xs);
    return wedge(std::span<const MinkVector>(v));
}

/// Projects a future or past lightlike vector to S^{n-1}_+ = {x lightlike, x_0 = 1}.
inline MinkVector lightcone_normalize(const MinkVector& x, double tol = kCausalTol) {
    if (std::abs(x.time()) <= tol) throw std::domain_error("lightcone_normalize: time component vanishes");
    if (causal_class(x, tol) != CausalClass::Lightlike)
        throw std::domain_error("lightcone_normalize: vector is not lightlike");
    return x / x.time();
}

inline bool on_lightcone_sphere(const MinkVector& v, double tol = 1e-10) {
    return std::abs(v.time() - 1.0) <= tol && std::abs(pseudo_dot(v, v)) <= tol * std::max(1.0, v.euclid_norm_sq());
}

/// HP(v, c) = { x : <x, v> = c }
class Hyperplane {
public:
    Hyperplane(MinkVector pseudo_normal, double offset) : normal_(std::move(pseudo_normal)), offset_(offset) {
        if (normal_.empty() || normal_.euclid_norm_sq() == 0.0)
            throw std::invalid_argument("Hyperplane: pseudo normal must be nonzero");
    }

    const MinkVector& pseudo_normal() const { return normal_; }
    double offset() const { return offset_; }

private:
    MinkVector normal_;
    double offset_;
};

/// <x, v> - c; zero iff x lies on the hyperplane.
inline double hyperplane_side(const Hyperplane& hp, const MinkVector& x) {
    return pseudo_dot(x, hp.pseudo_normal()) - hp.offset();
}

}  // namespace lightcone
