#pragma once

#include <Eigen/Core>
#include <cmath>

#include "emflight/scalar_ops.hpp"

namespace emflight {

// Forward-mode scalar carrying value, gradient, and dense Hessian with
// respect to N seed directions. One pass through the rigid-body dynamics
// with Dual2 inputs yields the exact Jacobian and all second derivatives
// needed by the collocation solver.
template <int N>
struct Dual2 {
    using Grad = Eigen::Matrix<double, N, 1>;
    using Hess = Eigen::Matrix<double, N, N>;

    double v = 0.0;
    Grad g = Grad::Zero();
    Hess h = Hess::Zero();

    Dual2() = default;
    explicit Dual2(double value) : v(value) {}

    // Independent variable with seed scale dx_dseed (chain rule for scaled
    // decision variables folds in here).
    static Dual2 variable(double value, int index, double dx_dseed = 1.0) {
        Dual2 r(value);
        r.g[index] = dx_dseed;
        return r;
    }
};

template <int N>
Dual2<N> operator+(const Dual2<N>& a, const Dual2<N>& b) {
    Dual2<N> r(a.v + b.v);
    r.g = a.g + b.g;
    r.h = a.h + b.h;
    return r;
}

template <int N>
Dual2<N> operator+(const Dual2<N>& a, double b) {
    Dual2<N> r = a;
    r.v += b;
    return r;
}

template <int N>
Dual2<N> operator+(double a, const Dual2<N>& b) { return b + a; }

template <int N>
Dual2<N> operator-(const Dual2<N>& a) {
    Dual2<N> r(-a.v);
    r.g = -a.g;
    r.h = -a.h;
    return r;
}

template <int N>
Dual2<N> operator-(const Dual2<N>& a, const Dual2<N>& b) {
    Dual2<N> r(a.v - b.v);
    r.g = a.g - b.g;
    r.h = a.h - b.h;
    return r;
}

template <int N>
Dual2<N> operator-(const Dual2<N>& a, double b) {
    Dual2<N> r = a;
    r.v -= b;
    return r;
}

template <int N>
Dual2<N> operator-(double a, const Dual2<N>& b) {
    Dual2<N> r(a - b.v);
    r.g = -b.g;
    r.h = -b.h;
    return r;
}

template <int N>
Dual2<N> operator*(const Dual2<N>& a, const Dual2<N>& b) {
    Dual2<N> r(a.v * b.v);
    r.g = b.v * a.g + a.v * b.g;
    r.h = b.v * a.h + a.v * b.h;
    r.h.noalias() += a.g * b.g.transpose();
    r.h.noalias() += b.g * a.g.transpose();
    return r;
}

template <int N>
Dual2<N> operator*(const Dual2<N>& a, double b) {
    Dual2<N> r(a.v * b);
    r.g = a.g * b;
    r.h = a.h * b;
    return r;
}

template <int N>
Dual2<N> operator*(double a, const Dual2<N>& b) { return b * a; }

template <int N>
Dual2<N> operator/(const Dual2<N>& a, const Dual2<N>& b) {
    Dual2<N> r(a.v / b.v);
    const double inv = 1.0 / b.v;
    r.g = (a.g - r.v * b.g) * inv;
    r.h = (a.h - r.v * b.h) * inv;
    r.h.noalias() -= (r.g * inv) * b.g.transpose();
    r.h.noalias() -= b.g * (r.g * inv).transpose();
    return r;
}

template <int N>
Dual2<N> operator/(const Dual2<N>& a, double b) { return a * (1.0 / b); }

template <int N>
Dual2<N> operator/(double a, const Dual2<N>& b) {
    return Dual2<N>(a) / b;
}

namespace detail {

// Composition r = f(a): r.h = f' a.h + f'' a.g a.g^T.
template <int N>
Dual2<N> chain(const Dual2<N>& a, double f, double f1, double f2) {
    Dual2<N> r(f);
    r.g = f1 * a.g;
    r.h = f1 * a.h;
    r.h.noalias() += f2 * (a.g * a.g.transpose());
    return r;
}

}  // namespace detail

template <int N>
Dual2<N> sin(const Dual2<N>& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return detail::chain(a, s, c, -s);
}

template <int N>
Dual2<N> cos(const Dual2<N>& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return detail::chain(a, c, -s, -c);
}

template <int N>
Dual2<N> exp(const Dual2<N>& a) {
    const double e = std::exp(a.v);
    return detail::chain(a, e, e, e);
}

template <int N>
Dual2<N> sqrt(const Dual2<N>& a) {
    const double s = std::sqrt(a.v);
    return detail::chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}

// x |x| for Dual2; the second derivative jump at zero is immaterial for the
// optimizer.
template <int N>
Dual2<N> signed_square(const Dual2<N>& a) {
    const double sgn = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
    return detail::chain(a, a.v * std::abs(a.v), 2.0 * std::abs(a.v), 2.0 * sgn);
}

template <int N>
Dual2<N> square(const Dual2<N>& a) {
    return detail::chain(a, a.v * a.v, 2.0 * a.v, 2.0);
}

}  // namespace emflight
