#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "todkit/geometry.hpp"
#include "todkit/rods.hpp"

namespace todkit {

// F(x) = a0 x^4 + a3 x^3 + a2 x^2 + a1 x + a0 with real roots p1 < p2 < p3 < p4
struct PdParams {
    std::array<double, 4> roots{};
    double a0 = 1;
    double a3 = 0;
    double a2 = 0;
    double a1 = 0;

    double F(double x) const;
    double dF(double x) const;
    // 1 - p^2 q^2 > 0 on the closed rectangle (p2, p3) x (p1, p2)
    bool rectangle_ok() const;
};

PdParams pd_params_from_roots(std::array<double, 4> roots, double a0 = 1.0);

// chart (tau, phi, p, q), jets in (p, q)
MetricJet pd_metric(const PdParams& params, double p, double q, int order = 2);

struct PdRods {
    std::array<Pair<double>, 4> l{};  // (d_tau, d_phi) components of l_1 .. l_4
    std::vector<std::pair<int, int>> collinear;  // consecutive 1-based pairs
};

PdRods pd_rod_vectors(const PdParams& params, double tol = 1e-10);

struct PdRegularity {
    // from the P', Q' expressions
    double m = 0;
    double eps = 0;
    double n = 0;
    double eps_bar = 0;
    // closed forms for n*eps and m/(eps*eps_bar)
    double m_simplified = 0;
    double n_simplified = 0;
    // l_3 = -eps l_1 + m l_2, l_4 = -eps_bar l_2 + n l_3 solved directly
    double m_direct = 0;
    double eps_direct = 0;
    double n_direct = 0;
    double eps_bar_direct = 0;
    double agreement = 0;  // largest mismatch between the three routes
};

PdRegularity pd_regularity(const PdParams& params);

enum class PdCase { i, ii, iii };
std::string to_string(PdCase c);
PdCase parse_pd_case(const std::string& s);

struct PdSample {
    std::array<double, 4> roots{};
    double m = 0, n = 0, eps = 0, eps_bar = 0;
    bool admissible = false;
    bool certified = false;   // the case's inequality chain holds
    bool rectangle = true;
    std::string certificate;
};

struct PdScanReport {
    PdCase which = PdCase::i;
    int samples = 0;
    std::uint64_t seed = 0;
    int admissible = 0;
    int certified = 0;
    int rectangle_violations = 0;
    int integral_candidates_checked = 0;
    int integral_candidates_failed = 0;  // candidates failing the inequality chain
    double min_eps_bar = 0;
    double max_eps_bar = 0;
    std::vector<PdSample> records;
};

PdScanReport pd_scan(PdCase which, int samples, std::uint64_t seed);

struct SelfDualReport {
    char which = '?';  // 'a' or 'b'
    bool flat = false;
    double eps = 0;    // case (a)
    double m = 0;      // case (a)
    double eps_bar = 0;  // case (b)
    double raw = 0;    // the same quantity from the P', Q' expressions
    bool rejected = false;
    std::string certificate;
};

SelfDualReport pd_selfdual_check(const PdParams& params, double tol = 1e-10);

// r = R + beta cos(Theta)/R, theta = Theta + gamma sin(Theta)/R^2
struct PdAleGauge {
    double beta = 0;
    double gamma = 0;
};

struct PdAleReport {
    double p = 0, q = 0;
    double prefactor = 0;          // 8(1 - p2^4)/(c P'(p2))
    double fitted_prefactor = 0;   // g_rr at this point, gauged chart
    double deviation = 0;          // |L^{-1} g L^{-T} - 1| with g0 = L L^T
    PdAleGauge gauge;
    double gauged_deviation = 0;   // same after the gauge correction
};

// least-squares gauge removing the r^-2 part of the deviation at r_fit
PdAleGauge pd_ale_gauge(const PdParams& params, double c_pd = 1.0, double r_fit = 200.0);

PdAleReport pd_ale_limit(const PdParams& params, double r, double theta, double c_pd = 1.0,
                         const PdAleGauge& gauge = {});

}  // namespace todkit
