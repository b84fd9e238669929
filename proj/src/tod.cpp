#include "todkit/tod.hpp"

#include <cmath>
#include <numbers>

namespace todkit {

namespace {

struct NutSums {
    Jet rho;
    Jet S;    // sum a_i R_i
    Jet P;    // sum a_i zeta_i / R_i
    Jet inv;  // sum a_i / R_i
    Jet Q;    // sum_{ij} a_i a_j (z_i - z_j)^2 / (R_i R_j)
    Jet D;    // rho^2 inv^2 + P^2
    Jet N;    // c F + C
    Jet x;
};

NutSums nut_sums(const RodData& rods, double rho, double zeta, int order) {
    const std::size_t n = rods.nuts.size();
    NutSums s;
    s.rho = Jet::seed(0, rho, order);
    std::vector<Jet> R, zi;
    s.S = s.P = s.inv = s.x = Jet(order);
    Jet T(order);
    for (const auto& nut : rods.nuts) {
        zi.push_back(Jet::seed(1, zeta - nut.z, order));
        R.push_back(sqrt(s.rho * s.rho + zi.back() * zi.back()));
        s.S += nut.a * R.back();
        s.P += nut.a * zi.back() / R.back();
        s.inv += nut.a / R.back();
        T += nut.a * zi.back() * R.back();
        s.x += nut.a * artanh_ratio(s.rho, zi.back());
    }
    s.Q = s.N = Jet(order);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = rods.nuts[i].z - rods.nuts[j].z;
            const double w = rods.nuts[i].a * rods.nuts[j].a * d * d;
            const Jet rr = R[i] * R[j];
            s.Q += (2 * w) / rr;
            s.N -= w * (s.S * (zi[i] + zi[j]) - T) / rr;
        }
    s.D = s.rho * s.rho * s.inv * s.inv + s.P * s.P;
    return s;
}

}  // namespace

TodFields tod_fields(const RodData& rods, double rho, double zeta, int order) {
    check_interior(rods, rho, zeta);
    const NutSums s = nut_sums(rods, rho, zeta, order);
    const double c = rods.c, C = gauge_constant(rods);
    TodFields f;
    f.W = -(s.S * s.Q) / (2 * c * s.D);
    f.e2nu = f.W * s.D;
    f.F = (s.N / s.D - C) / c;
    f.z = s.S;
    f.x = s.x;
    return f;
}

TodFields tod_fields_from_potential(const RodData& rods, double rho, double zeta, int order) {
    check_interior(rods, rho, zeta);
    const Jet V = build_v(rods, rho, zeta, order + 2);
    const Jet H = build_h(rods, rho, zeta, order, gauge_constant(rods));
    const Jet r = Jet::seed(0, rho, order);
    const Jet Vr = V.derivative(0).truncated(order), Vz = V.derivative(1).truncated(order);
    const Jet Vzz = V.derivative(1).derivative(1), Vzr = V.derivative(1).derivative(0);
    const double c = rods.c;
    const Jet den = Vzz * Vzz + Vzr * Vzr;
    TodFields f;
    f.W = (r * Vr + Vr * Vr * Vzz / den) / (2 * c);
    f.e2nu = f.W * r * r * den / 4.0;
    f.F = (r * Vr * Vr * Vzr / den - Vz * r * r - 2.0 * H) / (2 * c);
    const WardJets w = ward_jets(rods, rho, zeta, order);
    f.z = w.z;
    f.x = w.x;
    return f;
}

MetricJet tod_metric(const RodData& rods, double rho, double zeta, int order) {
    const TodFields f = tod_fields(rods, rho, zeta, order);
    if (!(f.W.value() > 0) && !(f.W.value() < 0))
        throw DegenerateMetricError("W vanishes: the Tod metric is degenerate at this point");
    const Jet r = Jet::seed(0, rho, order);
    MetricJet m;
    m.labels = {"tau", "y", "rho", "zeta"};
    m.base = {rho, zeta};
    for (auto& row : m.g) row.fill(Jet(order));
    const Jet invW = 1.0 / f.W;
    m.g[0][0] = invW;
    m.g[0][1] = m.g[1][0] = f.F * invW;
    m.g[1][1] = f.W * r * r + f.F * f.F * invW;
    m.g[2][2] = m.g[3][3] = f.e2nu;
    return m;
}

TwoFormJet fundamental_form(const RodData& rods, double rho, double zeta, int order) {
    check_interior(rods, rho, zeta);
    const NutSums s = nut_sums(rods, rho, zeta, order + 1);
    const TodFields f = tod_fields(rods, rho, zeta, order);
    const Jet Sr = s.S.derivative(0), Sz = s.S.derivative(1);
    const Jet r = s.rho.truncated(order);
    const Jet W = f.W, F = f.F;
    TwoFormJet w(order);
    w.set(0, 2, Sr);
    w.set(0, 3, Sz);
    w.set(1, 2, F * Sr + W * r * s.P.truncated(order));
    w.set(1, 3, F * Sz - W * r * r * s.inv.truncated(order));
    return w;
}

int tod_orientation(const RodData& rods, double rho, double zeta) {
    const Mat4 w = fundamental_form(rods, rho, zeta, 0).values();
    const double pf = w[0][1] * w[2][3] - w[0][2] * w[1][3] + w[0][3] * w[1][2];
    return pf > 0 ? 1 : (pf < 0 ? -1 : 0);
}

double w_from_toda(const RodData& rods, double rho, double zeta) {
    const auto [z, x] = ward_coords(rods, rho, zeta);
    const auto inv = ward_inverse_jets(rods, z, x, {rho, zeta}, 1);
    const Jet& pr = inv.first;
    const double uz = 2 * pr(1, 0) / pr.value();
    return z * (1 - z * uz / 2) / rods.c;
}

std::pair<double, double> eh_coords(double a, double r, double theta) {
    if (!(r > a) || !(a > 0)) throw DomainError("Eguchi-Hanson chart requires r > a > 0");
    if (!(theta > 0 && theta < std::numbers::pi)) throw DomainError("Eguchi-Hanson chart requires 0 < theta < pi");
    const double r4 = r * r * r * r, a4 = a * a * a * a;
    return {std::sqrt(r4 - a4) * std::sin(theta) / 4, r * r * std::cos(theta) / 4};
}

std::pair<Jet, Jet> eh_coords_jets(double a, double r, double theta, int order) {
    eh_coords(a, r, theta);
    const Jet R = Jet::seed(0, r, order), th = Jet::seed(1, theta, order);
    const double a4 = a * a * a * a;
    const Jet r2 = R * R;
    return {sqrt(r2 * r2 - a4) * sin(th) / 4.0, r2 * cos(th) / 4.0};
}

MetricJet eh_closed_form(double a, double r, double theta, int order) {
    if (!(r > a) || !(a > 0)) throw DomainError("Eguchi-Hanson metric requires r > a > 0 (r = a is the bolt)");
    if (!(theta > 0 && theta < std::numbers::pi)) throw DomainError("Eguchi-Hanson chart requires 0 < theta < pi");
    const Jet R = Jet::seed(0, r, order), th = Jet::seed(1, theta, order);
    const Jet r2 = R * R;
    const double a4 = a * a * a * a;
    const Jet f = 1.0 - a4 / (r2 * r2);
    const Jet ct = cos(th), st = sin(th);
    const Jet q = r2 / 4.0;
    MetricJet m;
    m.labels = {"tau", "phi", "r", "theta"};
    m.base = {r, theta};
    for (auto& row : m.g) row.fill(Jet(order));
    m.g[0][0] = f * q;
    m.g[0][1] = m.g[1][0] = f * q * ct;
    m.g[1][1] = f * q * ct * ct + q * st * st;
    m.g[2][2] = 1.0 / f;
    m.g[3][3] = q;
    return m;
}

RodData eh_rod_data(double a) {
    const double a2 = a * a;
    RodData d;
    d.c = -a2 * a2 / 16;
    d.nuts = {{-a2 / 4, 0.5}, {a2 / 4, 0.5}};
    return d;
}

RodData rescale(const RodData& rods, double alpha) {
    if (!(alpha > 0)) throw InvalidInput("rescale requires alpha > 0");
    RodData r = rods;
    r.c *= alpha;
    for (auto& n : r.nuts) n.z *= alpha;
    if (r.h_constant) *r.h_constant *= alpha * alpha;
    return r;
}

}  // namespace todkit
