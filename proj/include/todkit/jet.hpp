#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "todkit/errors.hpp"

namespace todkit {

// Truncated bivariate Taylor jet. Coefficient (i,j) is the raw partial
// derivative d^{i+j} f / d s^i d t^j at the base point.
template <typename T>
class Jet2 {
public:
    Jet2() : Jet2(4) {}
    explicit Jet2(int order) : order_(order), c_(size_for(order), T(0)) {
        if (order < 0) throw InvalidInput("jet order must be non-negative");
    }

    static Jet2 constant(const T& v, int order) {
        Jet2 r(order);
        r.c_[0] = v;
        return r;
    }

    // which: 0 = first variable, 1 = second variable
    static Jet2 seed(int which, const T& v, int order) {
        Jet2 r(order);
        r.c_[0] = v;
        if (order >= 1) r.c_[which == 0 ? index(1, 0) : index(0, 1)] = T(1);
        return r;
    }

    int order() const { return order_; }
    const T& value() const { return c_[0]; }
    const T& operator()(int i, int j) const { return c_[index(i, j)]; }
    T& operator()(int i, int j) { return c_[index(i, j)]; }

    // zero beyond the stored order
    T coeff(int i, int j) const {
        if (i < 0 || j < 0 || i + j > order_) return T(0);
        return c_[index(i, j)];
    }

    Jet2 truncated(int n) const {
        n = std::min(n, order_);
        Jet2 r(n);
        for (int d = 0; d <= n; ++d)
            for (int j = 0; j <= d; ++j) r(d - j, j) = (*this)(d - j, j);
        return r;
    }

    // partial derivative in variable `which`, one order lower
    Jet2 derivative(int which) const {
        if (order_ == 0) throw InvalidInput("cannot differentiate an order-0 jet");
        Jet2 r(order_ - 1);
        for (int d = 0; d < order_; ++d)
            for (int j = 0; j <= d; ++j) {
                int i = d - j;
                r(i, j) = which == 0 ? (*this)(i + 1, j) : (*this)(i, j + 1);
            }
        return r;
    }

    Jet2& operator+=(const Jet2& o) {
        shrink_to(o.order_);
        for (int d = 0; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) (*this)(d - j, j) += o(d - j, j);
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        shrink_to(o.order_);
        for (int d = 0; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) (*this)(d - j, j) -= o(d - j, j);
        return *this;
    }
    Jet2& operator+=(const T& s) { c_[0] += s; return *this; }
    Jet2& operator-=(const T& s) { c_[0] -= s; return *this; }
    Jet2& operator*=(const T& s) { for (auto& x : c_) x *= s; return *this; }
    Jet2& operator/=(const T& s) {
        if (s == T(0)) throw SingularPointError("jet division by zero scalar");
        for (auto& x : c_) x /= s;
        return *this;
    }

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator+(Jet2 a, const T& s) { return a += s; }
    friend Jet2 operator+(const T& s, Jet2 a) { return a += s; }
    friend Jet2 operator-(Jet2 a, const T& s) { return a -= s; }
    friend Jet2 operator-(const T& s, const Jet2& a) { return -a + s; }
    friend Jet2 operator*(Jet2 a, const T& s) { return a *= s; }
    friend Jet2 operator*(const T& s, Jet2 a) { return a *= s; }
    friend Jet2 operator/(Jet2 a, const T& s) { return a /= s; }
    friend Jet2 operator/(const T& s, const Jet2& a) { return constant(s, a.order()) / a; }
    Jet2 operator-() const {
        Jet2 r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        const int n = std::min(a.order_, b.order_);
        Jet2 r(n);
        for (int d = 0; d <= n; ++d)
            for (int j = 0; j <= d; ++j) {
                const int i = d - j;
                T acc(0);
                for (int p = 0; p <= i; ++p)
                    for (int q = 0; q <= j; ++q)
                        acc += binom(i, p) * binom(j, q) * a(p, q) * b(i - p, j - q);
                r(i, j) = acc;
            }
        return r;
    }

    // solves b*h = a degree by degree
    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        if (b.value() == T(0)) throw SingularPointError("jet division by a jet with zero value");
        const int n = std::min(a.order_, b.order_);
        Jet2 h(n);
        for (int d = 0; d <= n; ++d)
            for (int j = 0; j <= d; ++j) {
                const int i = d - j;
                T acc = a(i, j);
                for (int p = 0; p <= i; ++p)
                    for (int q = 0; q <= j; ++q) {
                        if (p == 0 && q == 0) continue;
                        acc -= binom(i, p) * binom(j, q) * b(p, q) * h(i - p, j - q);
                    }
                h(i, j) = acc / b.value();
            }
        return h;
    }

    Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
    Jet2& operator/=(const Jet2& o) { return *this = *this / o; }

    static T binom(int n, int k) {
        static constexpr long long table[13][13] = {
            {1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}, {1, 5, 10, 10, 5, 1},
            {1, 6, 15, 20, 15, 6, 1}, {1, 7, 21, 35, 35, 21, 7, 1},
            {1, 8, 28, 56, 70, 56, 28, 8, 1}, {1, 9, 36, 84, 126, 126, 84, 36, 9, 1},
            {1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1},
            {1, 11, 55, 165, 330, 462, 462, 330, 165, 55, 11, 1},
            {1, 12, 66, 220, 495, 792, 924, 792, 495, 220, 66, 12, 1}};
        if (n <= 12) return T(table[n][k]);
        long long r = 1;
        for (int m = 1; m <= k; ++m) r = r * (n - k + m) / m;
        return T(r);
    }

private:
    static std::size_t size_for(int n) { return static_cast<std::size_t>((n + 1) * (n + 2) / 2); }
    static std::size_t index(int i, int j) {
        const int d = i + j;
        return static_cast<std::size_t>(d * (d + 1) / 2 + j);
    }
    void shrink_to(int n) {
        if (n < order_) *this = truncated(n);
    }

    int order_;
    std::vector<T> c_;
};

namespace detail {

// f(a0 + delta) with derivs[k] = f^{(k)}(a0); delta is nilpotent of order a.order()+1
template <typename T>
Jet2<T> apply_univariate(const Jet2<T>& a, const std::vector<T>& derivs) {
    const int n = a.order();
    Jet2<T> delta = a;
    delta(0, 0) = T(0);
    Jet2<T> result = Jet2<T>::constant(derivs[0], n);
    Jet2<T> power = Jet2<T>::constant(T(1), n);
    T factorial(1);
    for (int k = 1; k <= n; ++k) {
        power = power * delta;
        factorial *= T(k);
        result += power * (derivs[static_cast<std::size_t>(k)] / factorial);
    }
    return result;
}

template <typename T>
std::string fmt(const T& v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace detail

template <std::floating_point T>
Jet2<T> log(const Jet2<T>& a) {
    const T x = a.value();
    if (!(x > 0)) throw DomainError("log: argument " + detail::fmt(x) + " is not positive");
    std::vector<T> d(static_cast<std::size_t>(a.order() + 1));
    d[0] = std::log(x);
    T fact(1);
    for (int k = 1; k <= a.order(); ++k) {
        if (k > 1) fact *= T(k - 1);
        d[static_cast<std::size_t>(k)] = ((k % 2 == 1) ? fact : -fact) / std::pow(x, k);
    }
    return detail::apply_univariate(a, d);
}

template <std::floating_point T>
Jet2<T> exp(const Jet2<T>& a) {
    std::vector<T> d(static_cast<std::size_t>(a.order() + 1), std::exp(a.value()));
    return detail::apply_univariate(a, d);
}

template <std::floating_point T>
Jet2<T> sqrt(const Jet2<T>& a) {
    const T x = a.value();
    if (!(x > 0)) throw DomainError("sqrt: argument " + detail::fmt(x) + " is not positive");
    std::vector<T> d(static_cast<std::size_t>(a.order() + 1));
    T coef(1), s = std::sqrt(x);
    for (int k = 0; k <= a.order(); ++k) {
        d[static_cast<std::size_t>(k)] = coef * s / std::pow(x, k);
        coef *= T(0.5) - T(k);
    }
    return detail::apply_univariate(a, d);
}

template <std::floating_point T>
Jet2<T> artanh(const Jet2<T>& a) {
    const T x = a.value();
    if (!(std::abs(x) < 1)) throw DomainError("artanh: argument " + detail::fmt(x) + " outside (-1,1)");
    std::vector<T> d(static_cast<std::size_t>(a.order() + 1));
    d[0] = std::atanh(x);
    T fact(1);
    for (int k = 1; k <= a.order(); ++k) {
        if (k > 1) fact *= T(k - 1);
        const T left = ((k % 2 == 1) ? T(1) : T(-1)) / std::pow(T(1) + x, k);
        const T right = T(1) / std::pow(T(1) - x, k);
        d[static_cast<std::size_t>(k)] = T(0.5) * fact * (left + right);
    }
    return detail::apply_univariate(a, d);
}

template <std::floating_point T>
Jet2<T> sin(const Jet2<T>& a) {
    const T s = std::sin(a.value()), c = std::cos(a.value());
    const std::array<T, 4> cyc{s, c, -s, -c};
    std::vector<T> d(static_cast<std::size_t>(a.order() + 1));
    for (int k = 0; k <= a.order(); ++k) d[static_cast<std::size_t>(k)] = cyc[static_cast<std::size_t>(k % 4)];
    return detail::apply_univariate(a, d);
}

template <std::floating_point T>
Jet2<T> cos(const Jet2<T>& a) {
    const T s = std::sin(a.value()), c = std::cos(a.value());
    const std::array<T, 4> cyc{c, -s, -c, s};
    std::vector<T> d(static_cast<std::size_t>(a.order() + 1));
    for (int k = 0; k <= a.order(); ++k) d[static_cast<std::size_t>(k)] = cyc[static_cast<std::size_t>(k % 4)];
    return detail::apply_univariate(a, d);
}

// f(u, v) where f is a jet at (u0, v0) and u, v are jets in new variables
// whose values are u0, v0.
template <typename T>
Jet2<T> compose(const Jet2<T>& f, const Jet2<T>& u, const Jet2<T>& v) {
    const int n = std::min({f.order(), u.order(), v.order()});
    Jet2<T> du = u.truncated(n), dv = v.truncated(n);
    du(0, 0) = T(0);
    dv(0, 0) = T(0);
    std::vector<Jet2<T>> pu{Jet2<T>::constant(T(1), n)}, pv{Jet2<T>::constant(T(1), n)};
    for (int k = 1; k <= n; ++k) {
        pu.push_back(pu.back() * du);
        pv.push_back(pv.back() * dv);
    }
    Jet2<T> r(n);
    std::vector<T> fact{T(1)};
    for (int k = 1; k <= n; ++k) fact.push_back(fact.back() * T(k));
    for (int d = 0; d <= n; ++d)
        for (int j = 0; j <= d; ++j) {
            const int i = d - j;
            r += pu[static_cast<std::size_t>(i)] * pv[static_cast<std::size_t>(j)] *
                 (f(i, j) / (fact[static_cast<std::size_t>(i)] * fact[static_cast<std::size_t>(j)]));
        }
    return r;
}

using Jet = Jet2<double>;

}  // namespace todkit
