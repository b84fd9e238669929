#pragma once

// Finite-difference oracle. Shares no code with the jet engine: closed
// forms are re-derived here and derivatives come from central differences.
// Closed forms and differences run in extended precision; several of the
// literal formulas cancel badly in double.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Real = long double;
using Field = std::function<Real(Real, Real)>;
using Mat4 = std::array<std::array<Real, 4>, 4>;
using MetricFn = std::function<Mat4(Real, Real)>;

// d/dx, d2/dx2 and mixed central differences at step h
inline Real central(const Field& f, Real x, Real y, int i, int j, Real h) {
    if (i == 0 && j == 0) return f(x, y);
    if (i == 1 && j == 0) return (f(x + h, y) - f(x - h, y)) / (2 * h);
    if (i == 0 && j == 1) return (f(x, y + h) - f(x, y - h)) / (2 * h);
    if (i == 2 && j == 0) return (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
    if (i == 0 && j == 2) return (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h);
    if (i == 1 && j == 1)
        return (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
    return NAN;
}

// three-level Richardson on the h^2 error series
inline Real partial(const Field& f, Real x, Real y, int i, int j, Real h) {
    const Real d1 = central(f, x, y, i, j, h);
    const Real d2 = central(f, x, y, i, j, h / 2);
    const Real d4 = central(f, x, y, i, j, h / 4);
    const Real r1 = (4 * d2 - d1) / 3, r2 = (4 * d4 - d2) / 3;
    return (16 * r2 - r1) / 15;
}

inline double rel_err(double got, double want, double floor) {
    return std::abs(got - want) / std::max({std::abs(want), floor, 1e-300});
}

// ---- closed forms ----------------------------------------------------

struct Nut {
    Real z, a;
};

struct Rods {
    Real c;
    std::vector<Nut> nuts;
};

// log((R + s)/(R - s)) without cancellation
inline Real log_ratio(Real rho, Real s) {
    const Real R = std::hypot(rho, s);
    if (s >= 0) return std::log((R + s) * (R + s) / (rho * rho));
    return -std::log((R - s) * (R - s) / (rho * rho));
}

inline Real v0(Real rho, Real s) { return 2 * std::hypot(rho, s) - s * log_ratio(rho, s); }
inline Real h0(Real rho, Real s) { return s * std::hypot(rho, s) + rho * rho / 2 * log_ratio(rho, s); }

inline Real V(const Rods& r, Real rho, Real zeta) {
    Real v = 0;
    for (const auto& n : r.nuts) v += n.a * v0(rho, zeta - n.z);
    return v;
}

inline Real H(const Rods& r, Real rho, Real zeta, Real C) {
    Real h = C;
    for (const auto& n : r.nuts) h += n.a * h0(rho, zeta - n.z);
    return h;
}

struct VDerivs {
    Real vr, vz, vzz, vzr;
};

// V_rho = 2R/rho, V_zeta = -log ratio, V_zz = -2/R, V_zr = 2 s/(rho R), summed
inline VDerivs v_derivs(const Rods& r, Real rho, Real zeta) {
    VDerivs d{0, 0, 0, 0};
    for (const auto& n : r.nuts) {
        const Real s = zeta - n.z, R = std::hypot(rho, s);
        d.vr += n.a * 2 * R / rho;
        d.vz -= n.a * log_ratio(rho, s);
        d.vzz -= n.a * 2 / R;
        d.vzr += n.a * 2 * s / (rho * R);
    }
    return d;
}

struct Fields {
    Real W, e2nu, F, z;
};

inline Fields fields(const Rods& r, Real rho, Real zeta, Real C) {
    const VDerivs d = v_derivs(r, rho, zeta);
    const Real den = d.vzz * d.vzz + d.vzr * d.vzr;
    Fields f;
    f.W = (rho * d.vr + d.vr * d.vr * d.vzz / den) / (2 * r.c);
    f.e2nu = f.W * rho * rho / 4 * den;
    f.F = (rho * d.vr * d.vr * d.vzr / den - d.vz * rho * rho - 2 * H(r, rho, zeta, C)) / (2 * r.c);
    f.z = rho * d.vr / 2;
    return f;
}

inline Mat4 tod_metric(const Rods& r, Real rho, Real zeta, Real C) {
    const Fields f = fields(r, rho, zeta, C);
    Mat4 g{};
    g[0][0] = 1 / f.W;
    g[0][1] = g[1][0] = f.F / f.W;
    g[1][1] = f.W * rho * rho + f.F * f.F / f.W;
    g[2][2] = g[3][3] = f.e2nu;
    return g;
}

// chart (tau, phi, r, theta)
inline Mat4 eh_metric(Real a, Real r, Real th) {
    const Real f = 1 - std::pow(a / r, 4), q = r * r / 4, c = std::cos(th), s = std::sin(th);
    Mat4 g{};
    g[0][0] = f * q;
    g[0][1] = g[1][0] = f * q * c;
    g[1][1] = f * q * c * c + q * s * s;
    g[2][2] = 1 / f;
    g[3][3] = q;
    return g;
}

// chart (tau, phi, p, q); F = a0 prod (x - p_i)
inline Mat4 pd_metric(const std::array<double, 4>& roots, Real a0, Real p, Real q) {
    const auto F = [&](Real x) { return a0 * (x - roots[0]) * (x - roots[1]) * (x - roots[2]) * (x - roots[3]); };
    const Real P = F(p), Q = F(q), D = 1 - p * p * q * q, k = 1 / ((p - q) * (p - q));
    Mat4 g{};
    g[0][0] = k * (std::pow(q, 4) * P - Q) / D;
    g[0][1] = g[1][0] = k * (-q * q * P + p * p * Q) / D;
    g[1][1] = k * (P - std::pow(p, 4) * Q) / D;
    g[2][2] = k * D / P;
    g[3][3] = -k * D / Q;
    return g;
}

// ---- curvature from metric values --------------------------------------

struct Curvature {
    std::array<std::array<std::array<std::array<Real, 4>, 4>, 4>, 4> riemann{};  // R_abcd
    Mat4 ricci{};
    Mat4 ginv{};
};

inline Mat4 inverse(const Mat4& m) {
    // Gauss-Jordan with partial pivoting
    Mat4 a = m, inv{};
    for (int i = 0; i < 4; ++i) inv[i][i] = 1;
    for (int c = 0; c < 4; ++c) {
        int p = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        std::swap(a[c], a[p]);
        std::swap(inv[c], inv[p]);
        const Real d = a[c][c];
        for (int k = 0; k < 4; ++k) {
            a[c][k] /= d;
            inv[c][k] /= d;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            const Real f = a[r][c];
            for (int k = 0; k < 4; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

// coordinates 2, 3 are (x, y); 0, 1 are Killing
inline Curvature curvature(const MetricFn& gfn, Real x, Real y, Real h) {
    std::array<Mat4, 4> dg{};                  // dg[c][a][b] = d_c g_ab
    std::array<std::array<Mat4, 4>, 4> ddg{};  // ddg[c][d][a][b]
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const Field f = [&](Real u, Real v) { return gfn(u, v)[a][b]; };
            dg[2][a][b] = partial(f, x, y, 1, 0, h);
            dg[3][a][b] = partial(f, x, y, 0, 1, h);
            ddg[2][2][a][b] = partial(f, x, y, 2, 0, h);
            ddg[3][3][a][b] = partial(f, x, y, 0, 2, h);
            ddg[2][3][a][b] = ddg[3][2][a][b] = partial(f, x, y, 1, 1, h);
        }
    const Mat4 g = gfn(x, y);
    Curvature out;
    out.ginv = inverse(g);
    // Gamma_cab (first kind) and its derivatives
    auto gamma1 = [&](int c, int a, int b) { return 0.5 * (dg[a][c][b] + dg[b][c][a] - dg[c][a][b]); };
    auto dgamma1 = [&](int d, int c, int a, int b) {
        return 0.5 * (ddg[d][a][c][b] + ddg[d][b][c][a] - ddg[d][c][a][b]);
    };
    // R_abcd = d_c Gamma_{a,db} - d_d Gamma_{a,cb} + Gamma_{e,ad} Gamma^e_bc - Gamma_{e,ac} Gamma^e_bd
    std::array<std::array<std::array<Real, 4>, 4>, 4> G2{};  // Gamma^e_ab
    for (int e = 0; e < 4; ++e)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int f = 0; f < 4; ++f) G2[e][a][b] += out.ginv[e][f] * gamma1(f, a, b);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    Real v = dgamma1(c, a, d, b) - dgamma1(d, a, c, b);
                    for (int e = 0; e < 4; ++e) v += gamma1(e, a, d) * G2[e][b][c] - gamma1(e, a, c) * G2[e][b][d];
                    out.riemann[a][b][c][d] = v;
                }
    for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d)
            for (int a = 0; a < 4; ++a)
                for (int c = 0; c < 4; ++c) out.ricci[b][d] += out.ginv[a][c] * out.riemann[a][b][c][d];
    return out;
}

}  // namespace oracle
