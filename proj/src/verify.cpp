#include "todkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "todkit/classify.hpp"
#include "todkit/cky.hpp"
#include "todkit/curvature.hpp"
#include "todkit/tod.hpp"

namespace todkit {

Suite parse_suite(const std::string& s) {
    if (s == "fields") return Suite::fields;
    if (s == "curvature") return Suite::curvature;
    if (s == "rods") return Suite::rods;
    if (s == "cky") return Suite::cky;
    if (s == "all") return Suite::all;
    throw InvalidInput("unknown suite '" + s + "'");
}

std::string to_string(Suite s) {
    switch (s) {
        case Suite::fields: return "fields";
        case Suite::curvature: return "curvature";
        case Suite::rods: return "rods";
        case Suite::cky: return "cky";
        case Suite::all: return "all";
    }
    return "?";
}

std::vector<std::pair<double, double>> sample_points(const RodData& rods) {
    const double L = std::max(1e-300, data_scale(rods));
    const double mid = (rods.nuts.front().z + rods.nuts.back().z) / 2;
    std::vector<std::pair<double, double>> pts;
    for (double r : {0.3, 0.7, 1.3})
        for (double s : {-1.1, -0.4, 0.15, 0.6, 1.2}) {
            const double rho = r * L, zeta = mid + s * L;
            try {
                check_interior(rods, rho, zeta);
            } catch (const Error&) {
                continue;
            }
            pts.emplace_back(rho, zeta);
        }
    return pts;
}

namespace {

std::string at(double rho, double zeta) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "rho=%.6g zeta=%.6g", rho, zeta);
    return buf;
}

// running maximum with its location
struct Worst {
    double value = 0;
    std::string where;
    void take(double v, const std::string& w) {
        if (!(v <= value)) {
            value = v;
            where = w;
        }
    }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void fields_suite(const RodFile& in, const Tolerances& tol, VerificationReport& rep, bool degenerate) {
    const RodData& rods = in.rods;
    const auto pts = sample_points(rods);
    Worst harm, conj, gram, wtoda, toda, lap;
    double wmin = std::numeric_limits<double>::infinity();
    std::string wmin_at;
    for (auto [rho, zeta] : pts) {
        const std::string loc = at(rho, zeta);
        const Jet V = build_v(rods, rho, zeta, 2);
        const Jet H = build_h(rods, rho, zeta, 1, gauge_constant(rods));
        const double lapV = V(2, 0) + V(1, 0) / rho + V(0, 2);
        harm.take(std::abs(lapV) / (std::abs(V(2, 0)) + std::abs(V(1, 0) / rho) + std::abs(V(0, 2))), loc);
        const double hs = std::abs(rho * V(0, 1)) + std::abs(rho * V(1, 0));
        conj.take(std::max(std::abs(H(1, 0) + rho * V(0, 1)), std::abs(H(0, 1) - rho * V(1, 0))) / hs, loc);
        if (degenerate) continue;
        const TodFields f = tod_fields(rods, rho, zeta, 2);
        if (f.W.value() < wmin) {
            wmin = f.W.value();
            wmin_at = loc;
        }
        const Mat4 g = tod_metric(rods, rho, zeta, 0).values();
        gram.take(rel(g[0][0] * g[1][1] - g[0][1] * g[1][0], rho * rho), loc);
        wtoda.take(rel(w_from_toda(rods, rho, zeta), f.W.value()), loc);
        const auto [z, x] = ward_coords(rods, rho, zeta);
        const auto inv = ward_inverse_jets(rods, z, x, {rho, zeta}, 2);
        const double scale = std::abs((2.0 * log(inv.first))(0, 2)) + std::abs((inv.first * inv.first)(2, 0));
        toda.take(toda_residual(rods, z, x, std::pair{rho, zeta}) / scale, loc);
        const MetricJet m = tod_metric(rods, rho, zeta, 2);
        const Jet omega = 1.0 / f.z;
        const double o = omega.value();
        const double target = -2 * rods.c * o * o * o * o;
        lap.take(std::abs(scalar_laplacian(m, omega) - target) / std::abs(target), loc);
    }
    rep.add("fields.harmonicity", harm.value, tol.identity, harm.where);
    rep.add("fields.conjugacy", conj.value, tol.identity, conj.where);
    if (degenerate) {
        const DegeneracyReport d = verify_n1_degenerate(rods);
        Check c{"fields.w_nondegenerate", Status::fail, d.max_abs_w, d.scale * 1e-12, {},
                "W = 0 identically (single turning point); the metric is degenerate"};
        rep.checks.push_back(c);
        for (const char* name : {"fields.gram_determinant", "fields.w_toda_consistency", "fields.toda_equation",
                                 "fields.conformal_factor"})
            rep.add_status(name, Status::skip, "degenerate data");
        return;
    }
    Check c{"fields.w_positive", wmin > 0 ? Status::pass : Status::fail, wmin, 0, wmin_at, "minimum sampled W"};
    rep.checks.push_back(c);
    rep.add("fields.gram_determinant", gram.value, tol.identity, gram.where);
    rep.add("fields.w_toda_consistency", wtoda.value, tol.toda, wtoda.where);
    rep.add("fields.toda_equation", toda.value, tol.toda, toda.where);
    rep.add("fields.conformal_factor", lap.value, tol.laplacian, lap.where);
}

void curvature_suite(const RodFile& in, const Tolerances& tol, VerificationReport& rep, bool degenerate) {
    const char* names[] = {"curvature.ricci_flat", "curvature.riemann_symmetries", "curvature.lambda_z3",
                           "curvature.weyl_plus_spectrum", "curvature.complex_structure"};
    if (degenerate) {
        for (const char* n : names) rep.add_status(n, Status::skip, "degenerate data");
        return;
    }
    const RodData& rods = in.rods;
    Worst ricci, sym, lam, spec, jj;
    int no_lambda = 0;
    for (auto [rho, zeta] : sample_points(rods)) {
        const std::string loc = at(rho, zeta);
        const MetricJet m = tod_metric(rods, rho, zeta, 2);
        const int orient = tod_orientation(rods, rho, zeta);
        const CurvaturePack p = curvature_pack(m, orient);
        const double nr = norm(p.riemann, p.ginv);
        ricci.take(norm(p.ricci, p.ginv) / nr, loc);
        const SymmetryResiduals s = symmetry_residuals(p);
        sym.take(std::max({s.antisymmetry, s.pair_symmetry, s.bianchi, s.weyl_trace}) / nr, loc);
        const WeylSplit w = weyl_split(p);
        const double z = ward_coords(rods, rho, zeta).first;
        if (!w.lambda) {
            ++no_lambda;
        } else {
            const double l = *w.lambda;
            lam.take(std::abs(l * z * z * z + 2 * rods.c) / std::abs(2 * rods.c), loc);
            auto e = w.sd_eigenvalues;
            std::sort(e.begin(), e.end());
            const std::array<double, 3> want = l > 0 ? std::array{-l / 2, -l / 2, l} : std::array{l, -l / 2, -l / 2};
            double d = 0;
            for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(e[i] - want[i]));
            spec.take(d / std::abs(l), loc);
        }
        const Mat4 om = fundamental_form(rods, rho, zeta, 0).values();
        const Mat4& gi = p.ginv;
        // J^a_b = g^{ac} w_cb
        Mat4 J{};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) J[a][b] += gi[a][c] * om[c][b];
        double d = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double s2 = a == b ? 1.0 : 0.0;
                for (int c = 0; c < 4; ++c) s2 += J[a][c] * J[c][b];
                d = std::max(d, std::abs(s2));
            }
        jj.take(d, loc);
    }
    rep.add(names[0], ricci.value, tol.ricci, ricci.where);
    rep.add(names[1], sym.value, 1e-10, sym.where);
    if (no_lambda > 0) {
        rep.add_status(names[2], Status::fail, std::to_string(no_lambda) + " points without a simple eigenvalue");
    } else {
        rep.add(names[2], lam.value, tol.weyl, lam.where);
        rep.add(names[3], spec.value, tol.weyl, spec.where);
    }
    rep.add(names[4], jj.value, 1e-10, jj.where, "|J^2 + 1|");
}

void rods_suite(const RodFile& in, const Tolerances& tol, VerificationReport& rep, bool degenerate) {
    const RodData& rods = in.rods;
    const int n = static_cast<int>(rods.nuts.size());
    const AxisProfile prof = axis_profile(rods);
    if (in.mode == Mode::ale) {
        const double d = std::max(std::abs(prof.f_slopes.front() + 1), std::abs(prof.f_slopes.back() - 1));
        rep.add("rods.endpoint_slopes", d, 1e-12);
    }
    if (degenerate) {
        for (const char* name : {"rods.conical", "rods.gl2z", "rods.lens", "rods.f_constant", "rods.axis_w"})
            rep.add_status(name, Status::skip, "degenerate data");
        return;
    }
    for (int i = 0; i <= n; ++i) {
        const std::string name = "rods.conical[" + std::to_string(i) + "]";
        try {
            const ConicalResult c = conical_check(rods, i);
            rep.add(name, std::abs(c.limit - 1), tol.conical, "rod " + std::to_string(i),
                    "limit " + format_double(c.limit));
        } catch (const Error& e) {
            rep.add_status(name, Status::fail, e.what());
        }
    }
    std::string lattice;
    if (in.exact_input) {
        const ExactRodStructure s = rod_vectors(in.exact);
        for (const auto& r : gl2z_compatibility(s)) {
            const std::string name = "rods.gl2z[" + std::to_string(r.j) + "]";
            if (r.integral)
                rep.add_status(name, Status::pass,
                               "l = " + std::to_string(r.l) + ", eps = " + std::to_string(r.eps) + " (exact)");
            else
                rep.add_status(name, Status::fail, r.violation);
        }
        const LensLabel lens = asymptotic_class(s);
        rep.add_status("rods.lens", lens.ale ? Status::pass : Status::fail,
                       lens.ale ? "L(" + std::to_string(lens.p) + "," + std::to_string(lens.q) + ")" : lens.note);
    } else {
        const RodStructure s = rod_vectors(rods);
        for (const auto& r : gl2z_compatibility(s)) {
            const std::string name = "rods.gl2z[" + std::to_string(r.j) + "]";
            const double dev = std::abs(r.l_raw - std::round(r.l_raw));
            if (r.integral)
                rep.add(name, dev, 1e-9, {}, "l = " + std::to_string(r.l) + ", eps = " + std::to_string(r.eps));
            else
                rep.add(name, std::max(dev, 1e-9 * 2), 1e-9, {}, r.violation);
        }
        const LensLabel lens = asymptotic_class(s);
        rep.add_status("rods.lens", lens.ale ? Status::pass : Status::fail,
                       lens.ale ? "L(" + std::to_string(lens.p) + "," + std::to_string(lens.q) + ")" : lens.note);
    }
    // F constant and W positive on rods with f' != 0
    double dF = 0, wmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        if (prof.f_slopes[static_cast<std::size_t>(i)] == 0) continue;
        const double z0 = rod_midpoint(rods, i);
        const double L = std::max(1.0, data_scale(rods));
        const TodFields f = tod_fields(rods, 1e-5 * L, z0, 1);
        dF = std::max(dF, std::abs(f.F(0, 1)));
        wmin = std::min(wmin, axis_w(rods, z0));
    }
    rep.add("rods.f_constant", dF, 1e-6, {}, "|dF/dzeta| at rho = 1e-5");
    rep.checks.push_back({"rods.axis_w", wmin > 0 ? Status::pass : Status::fail, wmin, 0, {}, "minimum axis W"});
}

void cky_suite(const RodFile& in, const Tolerances& tol, VerificationReport& rep, bool degenerate) {
    if (degenerate) {
        for (const char* name : {"cky.residual", "cky.norm_identity", "cky.xi_killing", "cky.decay"})
            rep.add_status(name, Status::skip, "degenerate data");
        return;
    }
    const RodData& rods = in.rods;
    Worst res, nrm, xi, kil;
    for (auto [rho, zeta] : sample_points(rods)) {
        const std::string loc = at(rho, zeta);
        const MetricJet m = tod_metric(rods, rho, zeta, 2);
        const TwoFormJet Z = tod_cky_candidate(rods, rho, zeta, 2);
        const CkyResult r = cky_residual(m, Z);
        res.take(r.residual / std::max(r.gradient_norm, 1e-300), loc);
        const double z = ward_coords(rods, rho, zeta).first;
        const Mat4 gi = inverse(m.values());
        nrm.take(std::abs(two_form_norm2(Z.values(), gi) - 4 * z * z) / (4 * z * z), loc);
        xi.take(std::max({std::abs(r.xi[0] - 1), std::abs(r.xi[1]), std::abs(r.xi[2]), std::abs(r.xi[3])}), loc);
        if (r.killing) kil.take(*r.killing, loc);
    }
    rep.add("cky.residual", res.value, tol.cky, res.where, "|L(Z)| / |grad Z|");
    rep.add("cky.norm_identity", nrm.value, tol.identity, nrm.where);
    rep.add("cky.xi_killing", std::max(xi.value, kil.value), tol.cky, xi.where, "xi = d_tau and its Killing residual");
    if (in.mode != Mode::ale) {
        rep.add_status("cky.decay", Status::skip, "decay check needs ALE data");
        return;
    }
    const CkyDecayReport d = cky_decay_check(rods, {1e2, 3e2, 1e3, 3e3, 1e4});
    rep.add("cky.decay", std::abs(d.exponent + 2), 0.1, "r in [1e2, 1e4]",
            "exponent " + format_double(d.exponent) + ", k = " + format_double(d.k));
}

}  // namespace

VerificationReport verify(const RodFile& input, Suite suite, const Tolerances& tol) {
    VerificationReport rep;
    rep.suite = to_string(suite);
    rep.input_hash = hex64(input.hash);
    const bool degenerate = input.rods.nuts.size() == 1;
    const bool all = suite == Suite::all;
    if (all || suite == Suite::fields) fields_suite(input, tol, rep, degenerate);
    if (all || suite == Suite::curvature) curvature_suite(input, tol, rep, degenerate);
    if (all || suite == Suite::rods) rods_suite(input, tol, rep, degenerate);
    if (all || suite == Suite::cky) cky_suite(input, tol, rep, degenerate);
    return rep;
}

}  // namespace todkit
