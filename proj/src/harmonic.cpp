#include "todkit/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace todkit {

namespace {

std::string num(double v) { return detail::fmt(v); }

Jet radius(const Jet& rho, const Jet& zeta) { return sqrt(rho * rho + zeta * zeta); }

}  // namespace

void validate(const RodData& rods, Mode mode) {
    if (rods.nuts.empty()) throw InvalidInput("rod data needs at least one turning point");
    for (std::size_t i = 0; i < rods.nuts.size(); ++i) {
        const auto& n = rods.nuts[i];
        if (!std::isfinite(n.z) || !std::isfinite(n.a))
            throw InvalidInput("turning point " + std::to_string(i + 1) + " is not finite");
        if (!(n.a > 0))
            throw InvalidInput("weight a_" + std::to_string(i + 1) + " = " + num(n.a) + " must be positive");
        if (i > 0 && !(n.z > rods.nuts[i - 1].z))
            throw InvalidInput("turning points must be strictly increasing");
    }
    if (mode == Mode::ale) {
        if (!(rods.c < 0)) throw InvalidInput("the constant c must be negative (c = " + num(rods.c) + ")");
        double sum = 0;
        for (const auto& n : rods.nuts) sum += n.a;
        if (std::abs(sum - 1.0) > 1e-12)
            throw InvalidInput("ALE mode requires the weights to sum to 1 (sum = " + num(sum) + ")");
    } else if (rods.c == 0) {
        throw InvalidInput("the constant c must be non-zero");
    }
}

double data_scale(const RodData& rods) {
    if (rods.nuts.size() < 2) return 1.0;
    return rods.nuts.back().z - rods.nuts.front().z;
}

void check_interior(const RodData& rods, double rho, double zeta, const InteriorLimits& lim) {
    const double scale = data_scale(rods);
    if (!(rho > 0)) throw AxisEvaluationError("interior evaluation at rho = " + num(rho) + " (axis)");
    if (rho < lim.rho_min_factor * scale)
        throw AxisEvaluationError("rho = " + num(rho) + " below the interior minimum");
    double min_len = scale;
    for (std::size_t i = 1; i < rods.nuts.size(); ++i)
        min_len = std::min(min_len, rods.nuts[i].z - rods.nuts[i - 1].z);
    const double r_nut = lim.nut_radius_factor * min_len;
    for (const auto& n : rods.nuts)
        if (std::hypot(rho, zeta - n.z) < r_nut)
            throw DomainError("point lies inside the exclusion radius of the nut at z = " + num(n.z));
}

double AxisProfile::f(double zeta) const {
    double f = 0;
    for (const auto& m : nuts) f += m.a * std::abs(zeta - m.z);
    return f;
}

double AxisProfile::f_prime(double zeta) const {
    double s = 0;
    for (const auto& m : nuts) s += m.a * (zeta > m.z ? 1.0 : -1.0);
    return s;
}

double AxisProfile::vzz(double zeta) const {
    double v = 0;
    for (const auto& m : nuts) v -= 2 * m.a / std::abs(zeta - m.z);
    return v;
}

Jet artanh_ratio(const Jet& rho, const Jet& zeta) {
    const Jet R = radius(rho, zeta);
    if (zeta.value() >= 0) return log(R + zeta) - log(rho);
    return log(rho) - log(R - zeta);
}

Jet v0_jet(double rho, double zeta, int order) {
    if (!(rho > 0)) throw AxisEvaluationError("V0 evaluated on the axis");
    const Jet r = Jet::seed(0, rho, order), s = Jet::seed(1, zeta, order);
    return 2.0 * radius(r, s) - 2.0 * s * artanh_ratio(r, s);
}

Jet h0_jet(double rho, double zeta, int order) {
    if (!(rho > 0)) throw AxisEvaluationError("H0 evaluated on the axis");
    const Jet r = Jet::seed(0, rho, order), s = Jet::seed(1, zeta, order);
    return s * radius(r, s) + r * r * artanh_ratio(r, s);
}

Jet build_v(const RodData& rods, double rho, double zeta, int order) {
    Jet v(order);
    for (const auto& n : rods.nuts) v += n.a * v0_jet(rho, zeta - n.z, order);
    return v;
}

Jet build_h(const RodData& rods, double rho, double zeta, int order, double gauge_constant) {
    Jet h = Jet::constant(gauge_constant, order);
    for (const auto& n : rods.nuts) h += n.a * h0_jet(rho, zeta - n.z, order);
    return h;
}

WardJets ward_jets(const RodData& rods, double rho, double zeta, int order) {
    if (!(rho > 0)) throw AxisEvaluationError("Ward coordinates evaluated on the axis");
    const Jet r = Jet::seed(0, rho, order);
    WardJets w{Jet(order), Jet(order)};
    for (const auto& n : rods.nuts) {
        const Jet s = Jet::seed(1, zeta - n.z, order);
        w.z += n.a * radius(r, s);
        w.x += n.a * artanh_ratio(r, s);
    }
    return w;
}

std::pair<double, double> ward_coords(const RodData& rods, double rho, double zeta) {
    const WardJets w = ward_jets(rods, rho, zeta, 0);
    return {w.z.value(), w.x.value()};
}

namespace {

std::pair<double, double> default_guess(const RodData& rods, double z, double x) {
    double zbar = 0, asum = 0;
    for (const auto& n : rods.nuts) {
        zbar += n.a * n.z;
        asum += n.a;
    }
    zbar /= asum;
    const double R = z / asum;
    const double xs = x / asum;
    return {R / std::cosh(xs), zbar + R * std::tanh(xs)};
}

}  // namespace

std::pair<double, double> ward_inverse(const RodData& rods, double z, double x,
                                       std::pair<double, double> guess, const InverseOptions& opt) {
    if (!(z > 0)) throw DomainError("Ward inverse requires z > 0");
    double rho = guess.first, zeta = guess.second;
    if (!(rho > 0)) std::tie(rho, zeta) = default_guess(rods, z, x);
    const double zscale = std::max(1.0, std::abs(z));
    double res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opt.max_iterations; ++it) {
        const WardJets w = ward_jets(rods, rho, zeta, 1);
        const double fz = w.z.value() - z, fx = w.x.value() - x;
        res = std::abs(fz) / zscale + std::abs(fx);
        if (res < opt.tolerance) return {rho, zeta};
        const double a = w.z(1, 0), b = w.z(0, 1), c = w.x(1, 0), d = w.x(0, 1);
        const double det = a * d - b * c;
        if (det == 0 || !std::isfinite(det)) break;
        double dr = (d * fz - b * fx) / det;
        double dz = (-c * fz + a * fx) / det;
        double step = 1.0;
        while (rho - step * dr <= 0 && step > 1e-12) step *= 0.5;
        double best = res;
        for (int k = 0; k < 40; ++k) {
            const double nr = rho - step * dr, nz = zeta - step * dz;
            if (nr > 0) {
                const auto [zz, xx] = ward_coords(rods, nr, nz);
                const double nres = std::abs(zz - z) / zscale + std::abs(xx - x);
                if (nres < best || step < 1e-6) {
                    rho = nr;
                    zeta = nz;
                    break;
                }
            }
            step *= 0.5;
        }
    }
    const WardJets w = ward_jets(rods, rho, zeta, 0);
    res = std::abs(w.z.value() - z) / zscale + std::abs(w.x.value() - x);
    if (res < opt.tolerance) return {rho, zeta};
    throw InversionFailure("Ward inverse did not converge", res);
}

std::pair<Jet, Jet> ward_inverse_jets(const RodData& rods, double z, double x,
                                      std::pair<double, double> guess, int order) {
    const auto [rho, zeta] = ward_inverse(rods, z, x, guess);
    const WardJets fwd = ward_jets(rods, rho, zeta, order);
    const double a = fwd.z(1, 0), b = fwd.z(0, 1), c = fwd.x(1, 0), d = fwd.x(0, 1);
    const double det = a * d - b * c;
    if (det == 0) throw SingularPointError("Ward map has a singular Jacobian");
    // inverse Jacobian
    const double i00 = d / det, i01 = -b / det, i10 = -c / det, i11 = a / det;
    const Jet wz = Jet::seed(0, z, order), wx = Jet::seed(1, x, order);
    const Jet ez = wz - fwd.z.value(), ex = wx - fwd.x.value();
    Jet pr = rho + (i00 * ez + i01 * ex);
    Jet pz = zeta + (i10 * ez + i11 * ex);
    // each pass fixes one more order of the inverse
    for (int k = 1; k < order; ++k) {
        const Jet cz = compose(fwd.z, pr, pz) - wz;
        const Jet cx = compose(fwd.x, pr, pz) - wx;
        pr -= i00 * cz + i01 * cx;
        pz -= i10 * cz + i11 * cx;
    }
    return {pr, pz};
}

double toda_residual(const RodData& rods, double z, double x,
                     std::optional<std::pair<double, double>> guess) {
    const auto g = guess.value_or(std::pair<double, double>{-1.0, 0.0});
    const auto [rho, zeta] = ward_inverse_jets(rods, z, x, g, 2);
    (void)zeta;
    const Jet u = 2.0 * log(rho);
    const Jet eu = rho * rho;
    return std::abs(u(0, 2) + eu(2, 0));
}

AxisProfile axis_profile(const RodData& rods) {
    AxisProfile p;
    const std::size_t n = rods.nuts.size();
    for (std::size_t i = 0; i <= n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += (j < i) ? rods.nuts[j].a : -rods.nuts[j].a;
        p.f_slopes.push_back(s);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double f = 0;
        for (const auto& m : rods.nuts) f += m.a * std::abs(rods.nuts[i].z - m.z);
        p.f_values.push_back(f);
    }
    p.nuts = rods.nuts;
    auto nuts = rods.nuts;
    p.g_fn = [nuts](double zeta) {
        double g = 0;
        for (const auto& m : nuts) {
            const double s = std::abs(zeta - m.z);
            g += m.a * (2 * s - s * std::log(4 * s * s));
        }
        return g;
    };
    return p;
}

double axis_h(const RodData& rods, double zeta, double gauge_constant) {
    double h = gauge_constant;
    for (const auto& n : rods.nuts) h += n.a * (zeta - n.z) * std::abs(zeta - n.z);
    return h;
}

double symmetric_gauge_constant(const RodData& rods) {
    // F_i(C) = F_i(0) - C/c, so F_0 + F_n = 0 fixes C
    const auto& nuts = rods.nuts;
    const double span = std::max(1.0, data_scale(rods));
    auto f_at = [&](double zeta) {
        double f = 0;
        for (const auto& m : nuts) f += m.a * std::abs(zeta - m.z);
        return f;
    };
    auto slope_at = [&](double zeta) {
        double s = 0;
        for (const auto& m : nuts) s += m.a * (zeta > m.z ? 1.0 : -1.0);
        return s;
    };
    auto F0 = [&](double zeta) {
        const double f = f_at(zeta);
        return -(axis_h(rods, zeta, 0.0) - f * f / slope_at(zeta)) / rods.c;
    };
    const double left = nuts.front().z - span, right = nuts.back().z + span;
    return rods.c * (F0(left) + F0(right)) / 2;
}

double gauge_constant(const RodData& rods) {
    return rods.h_constant ? *rods.h_constant : symmetric_gauge_constant(rods);
}

}  // namespace todkit
