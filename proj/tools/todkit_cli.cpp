#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "todkit/classify.hpp"
#include "todkit/curvature.hpp"
#include "todkit/io.hpp"
#include "todkit/parallel.hpp"
#include "todkit/pd.hpp"
#include "todkit/tod.hpp"
#include "todkit/verify.hpp"

using namespace todkit;
using nlohmann::ordered_json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInput = 2;

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Usage("cannot write '" + out + "'");
    f << text;
}

std::pair<int, int> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) {
            const int n = std::stoi(s);
            return {n, n};
        }
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw Usage("grid must look like 20x20");
    }
}

std::pair<double, double> parse_range(const std::string& s) {
    const auto v = parse_number_list(s);
    if (v.size() != 2 || !(v[0] < v[1])) throw Usage("range must be 'lo,hi' with lo < hi");
    return {v[0], v[1]};
}

std::string e16(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

struct BuildOpts {
    std::string rod_file, grid = "20x20", rho_range, zeta_range, out;
};

int cmd_build(const BuildOpts& o) {
    const RodFile in = load_rod_file(o.rod_file);
    const RodData& rods = in.rods;
    if (rods.nuts.size() == 1) {
        std::cerr << "error: W = 0 identically for a single turning point; the metric is degenerate\n";
        return kFail;
    }
    const auto [nr, nz] = parse_grid(o.grid);
    if (nr < 1 || nz < 1) throw Usage("grid sizes must be positive");
    const double L = data_scale(rods);
    auto rr = o.rho_range.empty() ? std::pair{0.05 * L, 2 * L} : parse_range(o.rho_range);
    auto zr = o.zeta_range.empty() ? std::pair{rods.nuts.front().z - L, rods.nuts.back().z + L}
                                   : parse_range(o.zeta_range);
    if (!(rr.first > 0)) throw Usage("rho range must be positive");
    auto lin = [](std::pair<double, double> r, int n, int i) {
        return n == 1 ? (r.first + r.second) / 2 : r.first + (r.second - r.first) * i / (n - 1);
    };
    std::vector<std::string> rows(static_cast<std::size_t>(nr) * nz);
    parallel_for(rows.size(), [&](std::size_t k) {
        const double rho = lin(rr, nr, static_cast<int>(k) / nz);
        const double zeta = lin(zr, nz, static_cast<int>(k) % nz);
        const TodFields f = tod_fields(rods, rho, zeta, 2);
        const MetricJet m = tod_metric(rods, rho, zeta, 2);
        const WeylSplit w = weyl_split(curvature_pack(m, tod_orientation(rods, rho, zeta)));
        const double lam = w.lambda ? *w.lambda : std::nan("");
        rows[k] = e16(rho) + "," + e16(zeta) + "," + e16(f.W.value()) + "," + e16(f.F.value()) + "," +
                  e16(f.e2nu.value()) + "," + e16(f.z.value()) + "," + e16(lam) + "\n";
    });
    std::string text = "rho,zeta,W,F,e2nu,z,lambda\n";
    for (const auto& r : rows) text += r;
    emit(text, o.out);
    return kPass;
}

struct VerifyOpts {
    std::string rod_file, suite = "all", out;
    Tolerances tol;
};

int cmd_verify(const VerifyOpts& o) {
    const RodFile in = load_rod_file(o.rod_file);
    const VerificationReport rep = verify(in, parse_suite(o.suite), o.tol);
    emit(rep.json(), o.out);
    return rep.ok() ? kPass : kFail;
}

ordered_json family_json(const Family& f) {
    ordered_json j;
    j["n"] = f.n;
    j["branch"] = f.branch;
    j["slopes"] = f.slopes;
    auto& w = j["weights"] = ordered_json::array();
    for (const auto& q : f.weights) w.push_back(to_string(q));
    j["levels"] = f.levels;
    j["signs"] = f.signs;
    auto& lat = j["lattice"] = ordered_json::array();
    for (const auto& v : f.lattice) lat.push_back({v[0], v[1]});
    if (f.lens.ale) j["lens"] = "L(" + std::to_string(f.lens.p) + "," + std::to_string(f.lens.q) + ")";
    else j["lens"] = f.lens.note;
    if (!f.note.empty()) j["note"] = f.note;
    return j;
}

struct ClassifyOpts {
    int nmax = 4, lmax = 10;
    std::string asymptotics = "ale", out;
};

int cmd_classify(const ClassifyOpts& o) {
    if (o.nmax < 1) throw Usage("--nmax must be at least 1");
    if (o.lmax < 2) throw Usage("--lmax must be at least 2");
    Asymptotics mode;
    if (o.asymptotics == "ale") mode = Asymptotics::ale;
    else if (o.asymptotics == "af") mode = Asymptotics::af;
    else throw Usage("--asymptotics must be ale or af");
    const ClassificationReport r = search_admissible(o.nmax, o.lmax, mode);
    ordered_json j;
    j["schema"] = kReportSchema;
    j["suite"] = "classify";
    j["nmax"] = o.nmax;
    j["lmax"] = o.lmax;
    j["asymptotics"] = o.asymptotics;
    j["branches"] = r.branches;
    j["consulted_l_bound"] = r.consulted_l_bound;
    j["admissible"] = ordered_json::array();
    for (const auto& f : r.admissible) j["admissible"].push_back(family_json(f));
    j["informational"] = ordered_json::array();
    for (const auto& f : r.informational) j["informational"].push_back(family_json(f));
    j["certificates"] = ordered_json::array();
    for (const auto& c : r.certificates) j["certificates"].push_back({{"branch", c.branch}, {"reason", c.reason}});
    j["metadata"] = {{"version", kVersion}};
    emit(j.dump(2) + "\n", o.out);
    return kPass;
}

PdParams roots_arg(const std::string& s, double a0) {
    const auto v = parse_number_list(s);
    if (v.size() != 4) throw InvalidInput("--roots needs four comma-separated values");
    return pd_params_from_roots({v[0], v[1], v[2], v[3]}, a0);
}

ordered_json regularity_json(const PdRegularity& r) {
    return {{"m", r.m},
            {"eps", r.eps},
            {"n", r.n},
            {"eps_bar", r.eps_bar},
            {"m_simplified", r.m_simplified},
            {"n_simplified", r.n_simplified},
            {"agreement", r.agreement}};
}

struct PdOpts {
    std::string roots, which = "i", out;
    double a0 = 1, c_pd = 1, r = 100;
    int samples = 10000;
    std::uint64_t seed = 42;
    bool records = false;
};

int cmd_pd_check(const PdOpts& o) {
    const PdParams p = roots_arg(o.roots, o.a0);
    ordered_json j;
    j["schema"] = kReportSchema;
    j["suite"] = "pd.check";
    j["roots"] = p.roots;
    j["coefficients"] = {{"a0", p.a0}, {"a3", p.a3}, {"a2", p.a2}, {"a1", p.a1}};
    j["rectangle"] = p.rectangle_ok();
    const double scale = std::max({std::abs(p.a0), std::abs(p.a1), std::abs(p.a2), std::abs(p.a3)});
    const bool flat = std::abs(p.a3) <= 1e-10 * scale && std::abs(p.a1) <= 1e-10 * scale;
    const bool selfdual = std::abs(p.a3 - p.a1) <= 1e-10 * scale;
    j["verdict"] = flat ? "flat" : (selfdual ? "self-dual" : "generic");
    const PdRods rv = pd_rod_vectors(p);
    auto& l = j["rod_vectors"] = ordered_json::array();
    for (const auto& v : rv.l) l.push_back({v[0], v[1]});
    auto& col = j["collinear"] = ordered_json::array();
    for (auto [a, b] : rv.collinear) col.push_back({a, b});
    bool ok = true;
    if (rv.collinear.empty()) {
        const PdRegularity r = pd_regularity(p);
        j["regularity"] = regularity_json(r);
        const bool admissible = std::abs(r.eps - 1) < 1e-9 && std::abs(r.eps_bar - 1) < 1e-9 &&
                                std::abs(r.m - std::round(r.m)) < 1e-9 && std::abs(r.n - std::round(r.n)) < 1e-9;
        j["admissible"] = admissible;
        ok = r.agreement < 1e-10;
    } else {
        j["regularity"] = "collinear rod vectors; use the selfdual subcommand";
    }
    // Ricci at the centre of the rectangle
    const double pc = (p.roots[1] + p.roots[2]) / 2, qc = (p.roots[0] + p.roots[1]) / 2;
    const CurvaturePack cp = curvature_pack(pd_metric(p, pc, qc, 2));
    const double nr = norm(cp.riemann, cp.ginv);
    j["ricci_ratio"] = nr > 0 ? norm(cp.ricci, cp.ginv) / nr : 0.0;
    j["riemann_norm"] = nr;
    j["metadata"] = {{"version", kVersion}};
    emit(j.dump(2) + "\n", o.out);
    return ok ? kPass : kFail;
}

int cmd_pd_scan(const PdOpts& o) {
    if (o.samples < 1) throw Usage("--samples must be positive");
    const PdScanReport r = pd_scan(parse_pd_case(o.which), o.samples, o.seed);
    ordered_json j;
    j["schema"] = kReportSchema;
    j["suite"] = "pd.scan";
    j["case"] = to_string(r.which);
    j["samples"] = r.samples;
    j["admissible"] = r.admissible;
    j["certified"] = r.certified;
    j["rectangle_violations"] = r.rectangle_violations;
    j["integral_candidates_checked"] = r.integral_candidates_checked;
    j["integral_candidates_failed"] = r.integral_candidates_failed;
    j["eps_bar_range"] = {r.min_eps_bar, r.max_eps_bar};
    j["status"] = (r.admissible == 0 && r.certified == r.samples) ? "pass" : "fail";
    // first uncertified sample, if any
    for (const auto& s : r.records)
        if (!s.certified) {
            j["first_uncertified"] = {{"roots", s.roots}, {"certificate", s.certificate}};
            break;
        }
    if (o.records) {
        auto& rec = j["records"] = ordered_json::array();
        for (const auto& s : r.records)
            rec.push_back({{"roots", s.roots},
                           {"m", s.m},
                           {"n", s.n},
                           {"eps", s.eps},
                           {"eps_bar", s.eps_bar},
                           {"admissible", s.admissible},
                           {"certified", s.certified},
                           {"certificate", s.certificate}});
    }
    j["metadata"] = {{"version", kVersion}, {"seed", r.seed}};
    emit(j.dump(2) + "\n", o.out);
    return j["status"] == "pass" ? kPass : kFail;
}

int cmd_pd_selfdual(const PdOpts& o) {
    const PdParams p = roots_arg(o.roots, o.a0);
    const SelfDualReport r = pd_selfdual_check(p);
    ordered_json j;
    j["schema"] = kReportSchema;
    j["suite"] = "pd.selfdual";
    j["roots"] = p.roots;
    j["case"] = std::string(1, r.which);
    j["flat"] = r.flat;
    if (r.which == 'a') {
        j["eps"] = r.eps;
        j["m"] = r.m;
    } else {
        j["eps_bar"] = r.eps_bar;
    }
    j["raw"] = r.raw;
    j["rejected"] = r.rejected;
    j["certificate"] = r.certificate;
    j["metadata"] = {{"version", kVersion}};
    emit(j.dump(2) + "\n", o.out);
    return (r.rejected || r.flat) ? kPass : kFail;
}

int cmd_pd_ale(const PdOpts& o) {
    const PdParams p = roots_arg(o.roots, o.a0);
    const PdAleGauge g = pd_ale_gauge(p, o.c_pd);
    ordered_json j;
    j["schema"] = kReportSchema;
    j["suite"] = "pd.ale";
    j["roots"] = p.roots;
    j["gauge"] = {{"beta", g.beta}, {"gamma", g.gamma}};
    auto& pts = j["points"] = ordered_json::array();
    for (double r : {o.r, 2 * o.r}) {
        const PdAleReport a = pd_ale_limit(p, r, 1.1, o.c_pd, g);
        pts.push_back({{"r", r},
                       {"prefactor", a.prefactor},
                       {"fitted_prefactor", a.fitted_prefactor},
                       {"deviation", a.deviation},
                       {"gauged_deviation", a.gauged_deviation}});
    }
    const double ratio = pts[0]["gauged_deviation"].get<double>() / pts[1]["gauged_deviation"].get<double>();
    j["decay_ratio"] = ratio;
    j["metadata"] = {{"version", kVersion}};
    emit(j.dump(2) + "\n", o.out);
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toric Hermitian instanton toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    BuildOpts bo;
    auto* build = app.add_subcommand("build", "sample W, F, e^{2nu}, z, lambda on a grid");
    build->add_option("rod_file", bo.rod_file)->required();
    build->add_option("--grid", bo.grid, "NxM points in (rho, zeta)");
    build->add_option("--rho-range", bo.rho_range, "lo,hi");
    build->add_option("--zeta-range", bo.zeta_range, "lo,hi");
    build->add_option("-o,--out", bo.out);

    VerifyOpts vo;
    auto* ver = app.add_subcommand("verify", "run invariant suites");
    ver->add_option("rod_file", vo.rod_file)->required();
    ver->add_option("--suite", vo.suite)->check(CLI::IsMember({"fields", "curvature", "rods", "cky", "all"}));
    ver->add_option("-o,--out", vo.out);
    ver->add_option("--tol-identity", vo.tol.identity);
    ver->add_option("--tol-ricci", vo.tol.ricci);
    ver->add_option("--tol-weyl", vo.tol.weyl);
    ver->add_option("--tol-laplacian", vo.tol.laplacian);
    ver->add_option("--tol-cky", vo.tol.cky);
    ver->add_option("--tol-conical", vo.tol.conical);
    ver->add_option("--tol-toda", vo.tol.toda);

    ClassifyOpts co;
    auto* cls = app.add_subcommand("classify", "exact search over slope data");
    cls->add_option("--nmax", co.nmax);
    cls->add_option("--lmax", co.lmax);
    cls->add_option("--asymptotics", co.asymptotics)->check(CLI::IsMember({"ale", "af"}));
    cls->add_option("-o,--out", co.out);

    PdOpts po;
    auto* pd = app.add_subcommand("pd", "Plebanski-Demianski checks");
    pd->require_subcommand(1);
    auto* check = pd->add_subcommand("check", "metric, rod vectors and regularity for one root set");
    auto* scan = pd->add_subcommand("scan", "random root scan for one sign case");
    auto* sd = pd->add_subcommand("selfdual", "self-dual cases");
    auto* ale = pd->add_subcommand("ale", "asymptotic end comparison");
    for (auto* s : {check, sd, ale}) {
        s->add_option("--roots", po.roots, "p1,p2,p3,p4")->required();
        s->add_option("--a0", po.a0);
    }
    ale->add_option("--c", po.c_pd);
    ale->add_option("--r", po.r);
    scan->add_option("--case", po.which)->check(CLI::IsMember({"i", "ii", "iii"}));
    scan->add_option("--samples", po.samples);
    scan->add_option("--seed", po.seed);
    scan->add_flag("--records", po.records, "include every sample");
    for (auto* s : {check, scan, sd, ale}) s->add_option("-o,--out", po.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        if (*build) return cmd_build(bo);
        if (*ver) return cmd_verify(vo);
        if (*cls) return cmd_classify(co);
        if (*check) return cmd_pd_check(po);
        if (*scan) return cmd_pd_scan(po);
        if (*sd) return cmd_pd_selfdual(po);
        if (*ale) return cmd_pd_ale(po);
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kInput;
}
