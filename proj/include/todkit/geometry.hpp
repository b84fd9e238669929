#pragma once

#include <array>
#include <string>

#include "todkit/jet.hpp"

namespace todkit {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// Chart indices 0,1 are the Killing directions, 2,3 the essential
// coordinates in which the jets are taken.
struct MetricJet {
    std::array<std::string, 4> labels{"t0", "t1", "x0", "x1"};
    std::array<double, 2> base{0, 0};
    std::array<std::array<Jet, 4>, 4> g;

    int order() const;
    Mat4 values() const;
};

class TwoFormJet {
public:
    explicit TwoFormJet(int order = 2);

    Jet operator()(int a, int b) const;
    void set(int a, int b, const Jet& v);
    int order() const { return order_; }
    Mat4 values() const;

    TwoFormJet& operator+=(const TwoFormJet& o);
    TwoFormJet& operator*=(double s);
    friend TwoFormJet operator+(TwoFormJet a, const TwoFormJet& b) { return a += b; }
    friend TwoFormJet operator-(TwoFormJet a, TwoFormJet b) {
        b *= -1.0;
        return a += b;
    }
    friend TwoFormJet operator*(double s, TwoFormJet a) { return a *= s; }
    friend TwoFormJet operator*(const Jet& f, const TwoFormJet& a);

private:
    static int slot(int a, int b);
    int order_;
    std::array<Jet, 6> c_;
};

// alpha ^ beta for 1-forms given by their chart components
TwoFormJet wedge(const std::array<Jet, 4>& alpha, const std::array<Jet, 4>& beta);

// Pulls a metric back through (Killing) k_old = K k_new and essential
// old = (s(u,v), t(u,v)); s and t are jets in (u,v) one order above the
// result and take the metric's base point as their values.
MetricJet pullback(const MetricJet& g, const Mat2& killing, const Jet& s, const Jet& t,
                   const std::array<std::string, 4>& labels, std::array<double, 2> new_base);

TwoFormJet pullback(const TwoFormJet& w, const Mat2& killing, const Jet& s, const Jet& t);

}  // namespace todkit
