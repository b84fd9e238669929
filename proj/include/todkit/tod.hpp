#pragma once

#include <utility>

#include "todkit/geometry.hpp"
#include "todkit/harmonic.hpp"

namespace todkit {

struct TodFields {
    Jet W;
    Jet e2nu;
    Jet F;
    Jet z;
    Jet x;
};

// Fields from pairwise nut sums; free of the large cancellations the
// potential-derivative expressions suffer far from the nuts.
TodFields tod_fields(const RodData& rods, double rho, double zeta, int order = 2);

// The same fields assembled literally from the jets of V and H.
TodFields tod_fields_from_potential(const RodData& rods, double rho, double zeta, int order = 2);

// chart (tau, y, rho, zeta)
MetricJet tod_metric(const RodData& rods, double rho, double zeta, int order = 2);
TwoFormJet fundamental_form(const RodData& rods, double rho, double zeta, int order = 2);

// sign of omega ^ omega relative to dtau^dy^drho^dzeta
int tod_orientation(const RodData& rods, double rho, double zeta);

// W = c^{-1} z (1 - z u_z / 2) with u_z carried through the inverse Ward map
double w_from_toda(const RodData& rods, double rho, double zeta);

// chart (tau, phi, r, theta)
MetricJet eh_closed_form(double a, double r, double theta, int order = 2);
std::pair<double, double> eh_coords(double a, double r, double theta);
// eh_coords as jets in (r, theta)
std::pair<Jet, Jet> eh_coords_jets(double a, double r, double theta, int order);
RodData eh_rod_data(double a);

RodData rescale(const RodData& rods, double alpha);

}  // namespace todkit
