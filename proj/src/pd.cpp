#include "todkit/pd.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "todkit/parallel.hpp"

namespace todkit {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool near_integer(double v, double tol) { return std::abs(v - std::round(v)) <= tol; }

Pair<double> solve2(const Pair<double>& a, const Pair<double>& b, const Pair<double>& rhs) {
    // x a + y b = rhs
    const double det = a[0] * b[1] - a[1] * b[0];
    if (det == 0) throw DegenerateCaseError("collinear rod vectors");
    return {(rhs[0] * b[1] - rhs[1] * b[0]) / det, (a[0] * rhs[1] - a[1] * rhs[0]) / det};
}

bool collinear(const Pair<double>& a, const Pair<double>& b, double tol) {
    const double det = a[0] * b[1] - a[1] * b[0];
    return std::abs(det) <= tol * std::hypot(a[0], a[1]) * std::hypot(b[0], b[1]);
}

}  // namespace

// product form: the expanded quartic cancels badly near the roots
double PdParams::F(double x) const {
    return a0 * (x - roots[0]) * (x - roots[1]) * (x - roots[2]) * (x - roots[3]);
}

double PdParams::dF(double x) const {
    double s = 0;
    for (int i = 0; i < 4; ++i) {
        double t = a0;
        for (int j = 0; j < 4; ++j)
            if (j != i) t *= x - roots[j];
        s += t;
    }
    return s;
}

bool PdParams::rectangle_ok() const {
    const auto& r = roots;
    for (double p : {r[1], r[2]})
        for (double q : {r[0], r[1]})
            if (p * p * q * q > 1 + 1e-14) return false;
    return true;
}

PdParams pd_params_from_roots(std::array<double, 4> roots, double a0) {
    if (!(a0 > 0)) throw InvalidInput("a0 must be positive, got " + num(a0));
    for (int i = 0; i < 3; ++i)
        if (!(roots[static_cast<std::size_t>(i)] < roots[static_cast<std::size_t>(i + 1)]))
            throw InvalidInput("roots must be strictly increasing (repeated roots are new asymptotic ends)");
    const double prod = roots[0] * roots[1] * roots[2] * roots[3];
    if (std::abs(prod - 1) > 1e-12) throw InvalidInput("root product must be 1, got " + num(prod));
    const auto& r = roots;
    PdParams p;
    p.roots = roots;
    p.a0 = a0;
    const double e1 = r[0] + r[1] + r[2] + r[3];
    const double e2 = r[0] * r[1] + r[0] * r[2] + r[0] * r[3] + r[1] * r[2] + r[1] * r[3] + r[2] * r[3];
    const double e3 = r[0] * r[1] * r[2] + r[0] * r[1] * r[3] + r[0] * r[2] * r[3] + r[1] * r[2] * r[3];
    p.a3 = -a0 * e1;
    p.a2 = a0 * e2;
    p.a1 = -a0 * e3;
    if (std::abs(a0 * prod - a0) > 1e-12 * a0) throw InvalidInput("constant term differs from a0");
    return p;
}

MetricJet pd_metric(const PdParams& params, double p, double q, int order) {
    const auto& r = params.roots;
    if (!(p > r[1] && p < r[2] && q > r[0] && q < r[1]))
        throw DomainError("(p, q) = (" + num(p) + ", " + num(q) + ") outside the rectangle (p2, p3) x (p1, p2)");
    const Jet P0 = Jet::seed(0, p, order);
    const Jet Q0 = Jet::seed(1, q, order);
    auto poly = [&](const Jet& x) {
        return params.a0 * (x - r[0]) * (x - r[1]) * (x - r[2]) * (x - r[3]);
    };
    const Jet P = poly(P0);
    const Jet Q = poly(Q0);
    if (!(P.value() > 0) || !(Q.value() < 0))
        throw DomainError("signature requires P > 0 and Q < 0 at (" + num(p) + ", " + num(q) + ")");
    const Jet p2 = P0 * P0, q2 = Q0 * Q0;
    const Jet delta = 1.0 - p2 * q2;
    if (!(delta.value() > 0)) throw DomainError("1 - p^2 q^2 must be positive");
    const Jet diff = P0 - Q0;
    const Jet pre = 1.0 / (diff * diff);
    MetricJet m;
    m.labels = {"tau", "phi", "p", "q"};
    m.base = {p, q};
    for (auto& row : m.g)
        for (auto& x : row) x = Jet(order);
    const Jet Pd = P / delta, Qd = Q / delta;
    m.g[0][0] = pre * (Pd * q2 * q2 - Qd);
    m.g[1][1] = pre * (Pd - Qd * p2 * p2);
    m.g[0][1] = m.g[1][0] = pre * (Qd * p2 - Pd * q2);
    m.g[2][2] = pre * delta / P;
    m.g[3][3] = -(pre * delta / Q);
    return m;
}

PdRods pd_rod_vectors(const PdParams& params, double tol) {
    const auto& r = params.roots;
    PdRods out;
    const double s1 = 2 / params.dF(r[1]), s2 = 2 / params.dF(r[0]), s3 = 2 / params.dF(r[2]), s4 = 2 / params.dF(r[1]);
    out.l[0] = {s1 * r[1] * r[1], s1};
    out.l[1] = {s2, s2 * r[0] * r[0]};
    out.l[2] = {s3 * r[2] * r[2], s3};
    out.l[3] = {s4, s4 * r[1] * r[1]};
    for (int i = 0; i < 3; ++i)
        if (collinear(out.l[static_cast<std::size_t>(i)], out.l[static_cast<std::size_t>(i + 1)], tol))
            out.collinear.emplace_back(i + 1, i + 2);
    return out;
}

PdRegularity pd_regularity(const PdParams& params) {
    const PdRods rods = pd_rod_vectors(params);
    if (!rods.collinear.empty())
        throw DegenerateCaseError("rod vectors l_" + std::to_string(rods.collinear[0].first) + " and l_" +
                                  std::to_string(rods.collinear[0].second) +
                                  " are collinear; use the self-dual check");
    const auto& r = params.roots;
    const double p1 = r[0] * r[0], p2 = r[1] * r[1], p3 = r[2] * r[2];
    const double Pd2 = params.dF(r[1]), Pd3 = params.dF(r[2]), Qd1 = params.dF(r[0]), Qd2 = params.dF(r[1]);
    PdRegularity g;
    g.m = Qd1 / Pd3 * (p3 - p2) / (1 - p1 * p2);
    g.eps = -Pd2 / Pd3 * (1 - p1 * p3) / (1 - p1 * p2);
    g.n = Pd3 / Qd2 * (p2 - p1) / (1 - p1 * p3);
    g.eps_bar = -Qd1 / Qd2 * (1 - p2 * p3) / (1 - p1 * p3);
    g.m_simplified = (p3 - p2) / (1 - p2 * p3);
    g.n_simplified = (p1 - p2) / (1 - p1 * p2);
    // l_3 = -eps l_1 + m l_2
    const auto em = solve2(rods.l[0], rods.l[1], rods.l[2]);
    g.eps_direct = -em[0];
    g.m_direct = em[1];
    const auto en = solve2(rods.l[1], rods.l[2], rods.l[3]);
    g.eps_bar_direct = -en[0];
    g.n_direct = en[1];
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); };
    g.agreement = std::max({rel(g.m, g.m_direct), rel(g.eps, g.eps_direct), rel(g.n, g.n_direct),
                            rel(g.eps_bar, g.eps_bar_direct), rel(g.n * g.eps, g.n_simplified),
                            rel(g.m / (g.eps * g.eps_bar), g.m_simplified)});
    return g;
}

std::string to_string(PdCase c) {
    switch (c) {
        case PdCase::i: return "i";
        case PdCase::ii: return "ii";
        case PdCase::iii: return "iii";
    }
    return "?";
}

PdCase parse_pd_case(const std::string& s) {
    if (s == "i") return PdCase::i;
    if (s == "ii") return PdCase::ii;
    if (s == "iii") return PdCase::iii;
    throw InvalidInput("unknown PD case '" + s + "' (expected i, ii or iii)");
}

namespace {

// log-uniform magnitudes in [1e-2, 1e2]; the fourth root fixes the product
std::optional<PdParams> draw(PdCase which, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(std::log(1e-2), std::log(1e2));
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::array<double, 3> mag{std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))};
        std::array<double, 4> r{};
        if (which == PdCase::i) {
            r = {mag[0], mag[1], mag[2], 1 / (mag[0] * mag[1] * mag[2])};
        } else if (which == PdCase::ii) {
            r = {-mag[0], -mag[1], mag[2], 1 / (mag[0] * mag[1] * mag[2])};
        } else {
            r = {-mag[0], -mag[1], -mag[2], -1 / (mag[0] * mag[1] * mag[2])};
        }
        std::sort(r.begin(), r.end());
        bool distinct = true;
        for (int i = 0; i < 3; ++i)
            if (r[static_cast<std::size_t>(i + 1)] - r[static_cast<std::size_t>(i)] <
                1e-6 * std::abs(r[static_cast<std::size_t>(i + 1)]))
                distinct = false;
        if (!distinct) continue;
        const double prod = r[0] * r[1] * r[2] * r[3];
        r[3] /= prod;
        if (!(r[2] < r[3])) continue;
        PdParams p;
        try {
            p = pd_params_from_roots(r);
        } catch (const InvalidInput&) {
            continue;
        }
        // all-negative roots with unit product have p1^2 p2^2 > 1, so the
        // rectangle condition cannot hold in case (iii)
        if (which != PdCase::iii && !p.rectangle_ok()) continue;
        if (!pd_rod_vectors(p).collinear.empty()) continue;
        return p;
    }
    return std::nullopt;
}

PdSample certify(PdCase which, const PdParams& params, int& cand_checked, int& cand_failed) {
    const auto& r = params.roots;
    const PdRegularity g = pd_regularity(params);
    PdSample s;
    s.roots = r;
    s.m = g.m_simplified;
    s.n = g.n_simplified;
    s.eps = g.eps;
    s.eps_bar = g.eps_bar;
    s.admissible = std::abs(g.eps - 1) < 1e-9 && std::abs(g.eps_bar - 1) < 1e-9 && near_integer(g.m, 1e-9) &&
                   near_integer(g.n, 1e-9);
    const double p1 = r[0] * r[0], p2 = r[1] * r[1], p3 = r[2] * r[2];
    std::ostringstream os;
    os.precision(6);
    if (which == PdCase::i) {
        const double n_abs = std::abs(s.n);
        // p3^2 - p2^2 = m (1 - p2^4)/(1 + m p2^2) with m > 0 gives p2^2 < 1
        const double lhs = p3 - p2, rhs = s.m * (1 - p2 * p2) / (1 + s.m * p2);
        const bool chain = s.m > 0 && s.n < 0 && p2 < 1 && p1 < p2 && n_abs > 0 && n_abs < 1 &&
                           std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs));
        s.certified = chain;
        os << "m = " << s.m << " > 0, n = " << s.n << " < 0; p2^2 = " << p2
           << " < 1 forces |n| < 1 so n is not a nonzero integer";
        // integral candidates: |n| >= 1 pushes p2^2 >= 1 or p1^2 > 1
        const double nc = std::max(1.0, std::round(n_abs));
        const double p2c = (p1 + nc) / (1 + nc * p1);
        ++cand_checked;
        if (!(p1 < p2c && p2c < 1 && p1 < 1)) ++cand_failed;
    } else {
        const double ratio1 = (1 - p2 * p3) / (1 - p1 * p3);
        const double ratio2 = ((r[2] - r[0]) / (r[2] - r[1])) * ((r[3] - r[0]) / (r[3] - r[1]));
        const double raw2 = -params.dF(r[0]) / params.dF(r[1]);
        const bool factored = std::abs(raw2 - ratio2) <= 1e-9 * std::abs(ratio2);
        bool chain = s.n > 0 && p2 < p1 && ratio1 > 1 && ratio2 > 1 && factored && s.eps_bar > 1;
        if (which == PdCase::iii) chain = chain && s.m < 0;
        s.certified = chain;
        os << "n = " << s.n << (s.n > 0 ? " > 0" : " <= 0");
        if (which == PdCase::iii) os << ", m = " << s.m << (s.m < 0 ? " < 0" : " >= 0");
        os << "; (1 - p2^2 p3^2)/(1 - p1^2 p3^2) = " << ratio1 << " and -Q'(p1)/Q'(p2) = " << ratio2
           << " > 1, so eps_bar = " << s.eps_bar << (s.eps_bar > 1 ? " > 1" : " <= 1");
        if (!chain) os << " [chain does not hold]";
    }
    s.rectangle = params.rectangle_ok();
    if (!s.rectangle) {
        os << "; 1 - p^2 q^2 > 0 fails at the corner (p2, p1): p1^2 p2^2 = " << p1 * p2 << " > 1";
        s.admissible = false;
    }
    s.certificate = os.str();
    return s;
}

}  // namespace

PdScanReport pd_scan(PdCase which, int samples, std::uint64_t seed) {
    if (samples <= 0) throw InvalidInput("samples must be positive");
    PdScanReport rep;
    rep.which = which;
    rep.samples = samples;
    rep.seed = seed;
    rep.records.resize(static_cast<std::size_t>(samples));
    std::vector<int> checked(static_cast<std::size_t>(samples), 0), failed(static_cast<std::size_t>(samples), 0);
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t k) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(which)};
        std::mt19937_64 rng(seq);
        const auto p = draw(which, rng);
        if (!p) throw Error("root sampling failed for case " + to_string(which));
        rep.records[k] = certify(which, *p, checked[k], failed[k]);
    });
    rep.min_eps_bar = rep.records[0].eps_bar;
    rep.max_eps_bar = rep.records[0].eps_bar;
    for (std::size_t k = 0; k < rep.records.size(); ++k) {
        const auto& s = rep.records[k];
        rep.admissible += s.admissible ? 1 : 0;
        rep.certified += s.certified ? 1 : 0;
        rep.rectangle_violations += s.rectangle ? 0 : 1;
        rep.integral_candidates_checked += checked[k];
        rep.integral_candidates_failed += failed[k];
        rep.min_eps_bar = std::min(rep.min_eps_bar, s.eps_bar);
        rep.max_eps_bar = std::max(rep.max_eps_bar, s.eps_bar);
    }
    return rep;
}

SelfDualReport pd_selfdual_check(const PdParams& params, double tol) {
    const double scale = std::max({1.0, std::abs(params.a3), std::abs(params.a1)});
    if (std::abs(params.a3 - params.a1) > tol * scale)
        throw InvalidInput("not self-dual: a3 = " + num(params.a3) + ", a1 = " + num(params.a1));
    const auto& r = params.roots;
    const double p1 = r[0] * r[0], p2 = r[1] * r[1], p3 = r[2] * r[2];
    auto close = [&](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    SelfDualReport rep;
    std::ostringstream os;
    os.precision(6);
    if (close(r[2] * r[1], 1) && close(r[3] * r[0], 1)) {
        rep.which = 'a';
        rep.eps = (p2 - p1) / (1 - p1 * p2);
        rep.m = (1 - p1) * (1 + p2) / (1 - p1 * p2);
        rep.raw = -params.dF(r[1]) / params.dF(r[2]) * (1 - p1 * p3) / (1 - p1 * p2);
        rep.rejected = !close(rep.eps, 1) && !close(p2, 1);
        os << "case (a): l_3 and l_4 parallel; eps = (p2^2 - p1^2)/(1 - p1^2 p2^2) = " << rep.eps
           << " != 1, and eps = 1 would force p2^2 = 1 (p2^2 = " << p2 << ")";
    } else if (close(r[1] * r[0], 1) && close(r[2] * r[3], 1)) {
        rep.which = 'b';
        if (close(r[0], -1 / r[2])) {
            rep.flat = true;
            rep.rejected = true;
            os << "case (b) with p1 = -1/p3: only l_1 and l_4 independent, flat R^4 rod structure (a3 = "
               << params.a3 << ", a1 = " << params.a1 << ")";
        } else {
            rep.eps_bar = (p1 - p3) / (1 - p1 * p3);
            rep.raw = -params.dF(r[0]) / params.dF(r[1]) * (1 - p2 * p3) / (1 - p1 * p3);
            rep.rejected = !close(rep.eps_bar, 1) && !close(p1, 1);
            os << "case (b): l_1 and l_2 collinear; eps_bar = (p1^2 - p3^2)/(1 - p1^2 p3^2) = " << rep.eps_bar
               << " != 1, and eps_bar = 1 would force p1^2 = 1 (p1^2 = " << p1 << ")";
        }
    } else {
        throw InvalidInput("self-dual roots match neither p3 = 1/p2, p4 = 1/p1 nor p2 = 1/p1, p3 = 1/p4");
    }
    rep.certificate = os.str();
    return rep;
}

namespace {

// metric in (psi, varphi, R, Theta) after the asymptotic change composed with
// r = R + beta cos(Theta)/R, theta = Theta + gamma sin(Theta)/R^2
Eigen::Matrix4d ale_pullback(const PdParams& params, double R, double Theta, double c_pd, const PdAleGauge& gauge,
                             double& p, double& q) {
    const double cT = std::cos(Theta), sT = std::sin(Theta);
    const double r = R + gauge.beta * cT / R;
    const double theta = Theta + gauge.gamma * sT / (R * R);
    Eigen::Matrix2d J2;
    J2 << 1 - gauge.beta * cT / (R * R), -gauge.beta * sT / R, -2 * gauge.gamma * sT / (R * R * R),
        1 + gauge.gamma * cT / (R * R);
    const double p2r = params.roots[1];
    const double dP = params.dF(p2r);
    const double ch = std::cos(theta / 2), sh = std::sin(theta / 2);
    p = p2r + c_pd * ch * ch / (2 * r * r);
    q = p2r - c_pd * sh * sh / (2 * r * r);
    const Mat4 g = pd_metric(params, p, q, 0).values();
    // d(tau, phi, p, q)/d(psi, varphi, r, theta)
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    J(0, 0) = (1 + p2r * p2r) / dP;
    J(0, 1) = -(1 - p2r * p2r) / dP;
    J(1, 0) = (1 + p2r * p2r) / dP;
    J(1, 1) = (1 - p2r * p2r) / dP;
    J(2, 2) = -c_pd * ch * ch / (r * r * r);
    J(2, 3) = -c_pd * std::sin(theta) / (4 * r * r);
    J(3, 2) = c_pd * sh * sh / (r * r * r);
    J(3, 3) = -c_pd * std::sin(theta) / (4 * r * r);
    Eigen::Matrix4d K = Eigen::Matrix4d::Identity();
    K.block<2, 2>(2, 2) = J2;
    const Eigen::Matrix4d JK = J * K;
    Eigen::Matrix4d G;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) G(a, b) = g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    return JK.transpose() * G * JK;
}

Eigen::Matrix4d model_residual(const PdParams& params, double R, double Theta, double c_pd, const PdAleGauge& gauge,
                               double pref) {
    double p = 0, q = 0;
    const Eigen::Matrix4d gn = ale_pullback(params, R, Theta, c_pd, gauge, p, q);
    Eigen::Matrix4d g0 = Eigen::Matrix4d::Zero();
    const double ct = std::cos(Theta);
    g0(0, 0) = R * R / 4;
    g0(0, 1) = g0(1, 0) = R * R / 4 * ct;
    g0(1, 1) = R * R / 4;
    g0(2, 2) = 1;
    g0(3, 3) = R * R / 4;
    g0 *= pref;
    const Eigen::Matrix4d L = Eigen::LLT<Eigen::Matrix4d>(g0).matrixL();
    const Eigen::Matrix4d Li = L.inverse();
    return Li * gn * Li.transpose() - Eigen::Matrix4d::Identity();
}

double ale_prefactor(const PdParams& params, double c_pd) {
    const double p2r = params.roots[1];
    return 8 * (1 - std::pow(p2r, 4)) / (c_pd * params.dF(p2r));
}

}  // namespace

PdAleGauge pd_ale_gauge(const PdParams& params, double c_pd, double r_fit) {
    if (c_pd == 0) throw InvalidInput("the asymptotic constant must be non-zero");
    const double pref = ale_prefactor(params, c_pd);
    const std::array<double, 4> angles{0.4, 1.1, 1.9, 2.6};
    auto residual = [&](const PdAleGauge& g) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(angles.size() * 10));
        Eigen::Index k = 0;
        for (double th : angles) {
            const Eigen::Matrix4d M = model_residual(params, r_fit, th, c_pd, g, pref);
            for (int i = 0; i < 4; ++i)
                for (int j = i; j < 4; ++j) v(k++) = M(i, j);
        }
        return v;
    };
    // the residual is affine in (beta, gamma) at leading order
    PdAleGauge g;
    for (int it = 0; it < 3; ++it) {
        const Eigen::VectorXd v0 = residual(g);
        const double h = 1e-3 * std::max(1.0, std::abs(c_pd));
        Eigen::MatrixXd J(v0.size(), 2);
        J.col(0) = (residual({g.beta + h, g.gamma}) - v0) / h;
        J.col(1) = (residual({g.beta, g.gamma + h}) - v0) / h;
        const Eigen::Vector2d step = J.colPivHouseholderQr().solve(-v0);
        g.beta += step(0);
        g.gamma += step(1);
    }
    return g;
}

PdAleReport pd_ale_limit(const PdParams& params, double r, double theta, double c_pd, const PdAleGauge& gauge) {
    if (c_pd == 0) throw InvalidInput("the asymptotic constant must be non-zero");
    if (!(r > 0) || !(theta > 0 && theta < M_PI)) throw DomainError("need r > 0 and 0 < theta < pi");
    PdAleReport rep;
    rep.prefactor = ale_prefactor(params, c_pd);
    rep.gauge = gauge;
    const Eigen::Matrix4d gn = ale_pullback(params, r, theta, c_pd, gauge, rep.p, rep.q);
    rep.fitted_prefactor = gn(2, 2);
    rep.deviation = model_residual(params, r, theta, c_pd, PdAleGauge{}, rep.prefactor).norm();
    rep.gauged_deviation = model_residual(params, r, theta, c_pd, gauge, rep.prefactor).norm();
    return rep;
}

}  // namespace todkit
