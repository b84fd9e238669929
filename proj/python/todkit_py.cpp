#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "todkit/classify.hpp"
#include "todkit/cky.hpp"
#include "todkit/curvature.hpp"
#include "todkit/errors.hpp"
#include "todkit/io.hpp"
#include "todkit/pd.hpp"
#include "todkit/rods.hpp"
#include "todkit/tod.hpp"
#include "todkit/verify.hpp"

namespace py = pybind11;
using namespace todkit;

namespace {

RodData make_rods(double c, const std::vector<std::pair<double, double>>& nuts) {
    RodData r;
    r.c = c;
    for (const auto& [z, a] : nuts) r.nuts.push_back({z, a});
    return r;
}

py::dict fields(const RodData& rods, double rho, double zeta) {
    const TodFields f = tod_fields(rods, rho, zeta, 0);
    py::dict d;
    d["W"] = f.W.value();
    d["F"] = f.F.value();
    d["e2nu"] = f.e2nu.value();
    d["z"] = f.z.value();
    return d;
}

py::dict curvature(const RodData& rods, double rho, double zeta) {
    const CurvaturePack p = curvature_pack(tod_metric(rods, rho, zeta, 2), tod_orientation(rods, rho, zeta));
    const WeylSplit w = weyl_split(p);
    py::dict d;
    d["ricci_ratio"] = norm(p.ricci, p.ginv) / norm(p.riemann, p.ginv);
    d["sd_eigenvalues"] = w.sd_eigenvalues;
    d["asd_eigenvalues"] = w.asd_eigenvalues;
    d["lambda"] = w.lambda ? py::object(py::float_(*w.lambda)) : py::object(py::none());
    return d;
}

py::dict classify(int nmax, int lmax, const std::string& asymptotics) {
    if (asymptotics != "ale" && asymptotics != "af") throw InvalidInput("asymptotics must be 'ale' or 'af'");
    const ClassificationReport r = search_admissible(nmax, lmax, asymptotics == "ale" ? Asymptotics::ale : Asymptotics::af);
    py::list fams;
    for (const auto& f : r.admissible) {
        py::dict d;
        d["n"] = f.n;
        d["branch"] = f.branch;
        d["slopes"] = f.slopes;
        std::vector<std::string> w;
        for (const auto& q : f.weights) w.push_back(to_string(q));
        d["weights"] = w;
        d["levels"] = f.levels;
        d["signs"] = f.signs;
        d["lens"] = py::make_tuple(f.lens.p, f.lens.q);
        fams.append(d);
    }
    py::list certs;
    for (const auto& c : r.certificates) certs.append(py::make_tuple(c.branch, c.reason));
    py::dict out;
    out["admissible"] = fams;
    out["certificates"] = certs;
    out["branches"] = r.branches;
    return out;
}

py::dict pd_regularity_dict(const std::array<double, 4>& roots, double a0) {
    const PdRegularity g = pd_regularity(pd_params_from_roots(roots, a0));
    py::dict d;
    d["m"] = g.m;
    d["n"] = g.n;
    d["eps"] = g.eps;
    d["eps_bar"] = g.eps_bar;
    d["m_simplified"] = g.m_simplified;
    d["n_simplified"] = g.n_simplified;
    d["agreement"] = g.agreement;
    return d;
}

py::dict pd_scan_dict(const std::string& which, int samples, std::uint64_t seed) {
    const PdScanReport r = pd_scan(parse_pd_case(which), samples, seed);
    py::dict d;
    d["case"] = to_string(r.which);
    d["samples"] = r.samples;
    d["admissible"] = r.admissible;
    d["certified"] = r.certified;
    d["rectangle_violations"] = r.rectangle_violations;
    d["min_eps_bar"] = r.min_eps_bar;
    d["max_eps_bar"] = r.max_eps_bar;
    return d;
}

py::dict cky_decay(const RodData& rods, const std::vector<double>& radii) {
    const CkyDecayReport r = cky_decay_check(rods, radii);
    py::dict d;
    d["radii"] = r.radii;
    d["deviation"] = r.deviation;
    d["k"] = r.k;
    d["exponent"] = r.exponent;
    d["degenerate"] = r.degenerate;
    d["note"] = r.note;
    return d;
}

}  // namespace

PYBIND11_MODULE(_todkit, m) {
    m.doc() = "Toric Hermitian Ricci-flat metrics from axisymmetric harmonic functions";

    py::register_exception<Error>(m, "TodkitError", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);

    py::class_<RodData>(m, "RodData")
        .def(py::init(&make_rods), py::arg("c"), py::arg("nuts"))
        .def_readwrite("c", &RodData::c)
        .def_property_readonly("nuts",
                               [](const RodData& r) {
                                   std::vector<std::pair<double, double>> v;
                                   for (const auto& n : r.nuts) v.push_back({n.z, n.a});
                                   return v;
                               })
        .def(
            "validate",
            [](const RodData& r, const std::string& mode) {
                if (mode != "ale" && mode != "any") throw InvalidInput("mode must be 'ale' or 'any'");
                validate(r, mode == "ale" ? Mode::ale : Mode::any);
            },
            py::arg("mode") = "ale")
        .def("__repr__", [](const RodData& r) {
            std::string s = "RodData(c=" + format_double(r.c) + ", nuts=[";
            for (std::size_t i = 0; i < r.nuts.size(); ++i)
                s += (i ? ", (" : "(") + format_double(r.nuts[i].z) + ", " + format_double(r.nuts[i].a) + ")";
            return s + "])";
        });

    m.def("eh_rod_data", &eh_rod_data, py::arg("a") = 1.0);
    m.def("tod_fields", &fields, py::arg("rods"), py::arg("rho"), py::arg("zeta"));
    m.def(
        "tod_metric", [](const RodData& r, double rho, double zeta) { return tod_metric(r, rho, zeta, 0).values(); },
        py::arg("rods"), py::arg("rho"), py::arg("zeta"), "metric in the chart (tau, y, rho, zeta)");
    m.def(
        "eh_closed_form", [](double a, double r, double th) { return eh_closed_form(a, r, th, 0).values(); },
        py::arg("a"), py::arg("r"), py::arg("theta"));
    m.def("eh_coords", &eh_coords, py::arg("a"), py::arg("r"), py::arg("theta"));
    m.def("curvature", &curvature, py::arg("rods"), py::arg("rho"), py::arg("zeta"));
    m.def("lens_label", [](const RodData& r) {
        const LensLabel l = asymptotic_class(rod_vectors(r));
        return py::make_tuple(l.p, l.q);
    });
    m.def(
        "conical_limit", [](const RodData& r, int rod) { return conical_check(r, rod).limit; }, py::arg("rods"),
        py::arg("rod"));
    m.def(
        "verify",
        [](const std::string& rod_json, const std::string& suite) {
            return verify(parse_rod_file(rod_json), parse_suite(suite)).json();
        },
        py::arg("rod_json"), py::arg("suite") = "all", "JSON report for a rod file given as text");
    m.def("classify", &classify, py::arg("nmax") = 4, py::arg("lmax") = 10, py::arg("asymptotics") = "ale");
    m.def("pd_regularity", &pd_regularity_dict, py::arg("roots"), py::arg("a0") = 1.0);
    m.def("pd_scan", &pd_scan_dict, py::arg("case"), py::arg("samples"), py::arg("seed") = 42);
    m.def("cky_decay", &cky_decay, py::arg("rods"), py::arg("radii"));
    m.attr("__version__") = kVersion;
}
