#pragma once

#include <array>
#include <string>
#include <vector>

#include "todkit/curvature.hpp"
#include "todkit/harmonic.hpp"

namespace todkit {

// rows e^0..e^3, columns the chart (psi, phi, r, theta); jets in (r, theta)
using Coframe = std::array<std::array<Jet, 4>, 4>;

Coframe flat_coframe(double r, double theta, int order = 2);

// dr^2 + (r^2/4)((dpsi + cos(theta) dphi)^2 + dtheta^2 + sin^2(theta) dphi^2)
MetricJet flat_metric(double r, double theta, int order = 2);

// e0^e1 + e2^e3, e1^e2 + e0^e3, e1^e3 - e0^e2
std::array<TwoFormJet, 3> selfdual_basis(const Coframe& e);

// (*Z)_ab = (1/2) eps_abcd Z^cd
Mat4 hodge_star(const Mat4& Z, const Mat4& g, int orientation = 1);

// A ^ B as a multiple of dx^0 ^ dx^1 ^ dx^2 ^ dx^3
double wedge4(const Mat4& A, const Mat4& B);

struct FlatCkyParams {
    double k1 = 0;
    double k2 = 0;
};

// k1 r^2 (-cos(theta) w1 + sin(theta) w3) + k2 w1
TwoFormJet flat_cky(const FlatCkyParams& k, double r, double theta, int order = 2);

// 4(k1^2 r^4 + k2^2 - 2 k1 k2 r^2 cos(theta))
double flat_cky_norm2(const FlatCkyParams& k, double r, double theta);

// z * omega on the Tod metric, chart (tau, y, rho, zeta)
TwoFormJet tod_cky_candidate(const RodData& rods, double rho, double zeta, int order = 2);

struct CkyDecayReport {
    std::vector<double> radii;
    std::vector<double> deviation;  // max over sampled angles of |Z - Z0| in the flat metric
    FlatCkyParams fitted;           // matched at the largest radius
    double k = 0;                   // |Z0| ~ 2 r^2 / k
    double exponent = 0;            // log-log slope of the deviation
    bool degenerate = false;
    std::string note;
};

// Z compared with the flat family through rho = (r^2/4) sin(theta),
// zeta = zbar + (r^2/4) cos(theta), tau = phi, y = psi; evaluated with
// 50-digit arithmetic
CkyDecayReport cky_decay_check(const RodData& rods, const std::vector<double>& radii);

}  // namespace todkit
