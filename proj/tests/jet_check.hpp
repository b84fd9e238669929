#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "fd_oracle.hpp"
#include "todkit/jet.hpp"

namespace jetcheck {

using todkit::Jet;
using JetAt = std::function<Jet(double, double)>;

inline double same_order_scale(const Jet& j, int d) {
    double m = 0;
    for (int k = 0; k <= d; ++k) m = std::max(m, std::abs(j(d - k, k)));
    return m;
}

// coefficients of total order 1..2 against differences of an independent value field
inline double against_values(const oracle::Field& f, const Jet& j, double x, double y, double h) {
    double worst = 0;
    for (int d = 1; d <= std::min(2, j.order()); ++d)
        for (int k = 0; k <= d; ++k) {
            const double fd = oracle::partial(f, x, y, d - k, k, h);
            const double floor = 1e-3 * same_order_scale(j, d);
            worst = std::max(worst, oracle::rel_err(j(d - k, k), fd, floor));
        }
    return worst;
}

// separate steps per direction, through g(u, v) = f(x + hx u, y + hy v)
inline double against_values(const oracle::Field& f, const Jet& j, double x, double y, double hx, double hy) {
    const oracle::Field g = [&](double u, double v) { return f(x + hx * u, y + hy * v); };
    double worst = 0;
    for (int d = 1; d <= std::min(2, j.order()); ++d) {
        double scale = 0;
        for (int k = 0; k <= d; ++k) scale = std::max(scale, std::abs(j(d - k, k)) * std::pow(hx, d - k) * std::pow(hy, k));
        for (int k = 0; k <= d; ++k) {
            const double fd = oracle::partial(g, 0, 0, d - k, k, 1.0);
            const double got = j(d - k, k) * std::pow(hx, d - k) * std::pow(hy, k);
            worst = std::max(worst, oracle::rel_err(got, fd, 1e-3 * scale));
        }
    }
    return worst;
}

// every coefficient of order >= 1 against the difference of a coefficient one
// order lower taken from neighbouring jets
inline double against_self(const JetAt& at, double x, double y, double h) {
    const Jet j = at(x, y);
    double worst = 0;
    for (int d = 1; d <= j.order(); ++d)
        for (int k = 0; k <= d; ++k) {
            const int i = d - k;
            const bool dx = i > 0;
            const int li = dx ? i - 1 : i, lk = dx ? k : k - 1;
            const oracle::Field lower = [&](double u, double v) { return at(u, v)(li, lk); };
            const double fd = oracle::partial(lower, x, y, dx ? 1 : 0, dx ? 0 : 1, h);
            const double floor = 1e-3 * same_order_scale(j, d);
            worst = std::max(worst, oracle::rel_err(j(i, k), fd, floor));
        }
    return worst;
}

}  // namespace jetcheck
