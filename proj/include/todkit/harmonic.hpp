#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "todkit/jet.hpp"

namespace todkit {

template <typename T>
struct BasicNut {
    T z;
    T a;
};

template <typename T>
struct BasicRodData {
    T c = T(-1);
    std::vector<BasicNut<T>> nuts;
    // nullopt selects the symmetric gauge (F equal and opposite on the two
    // semi-infinite rods)
    std::optional<T> h_constant;
};

using Nut = BasicNut<double>;
using RodData = BasicRodData<double>;

enum class Mode { ale, any };

// Throws InvalidInput with a message naming the violated requirement.
void validate(const RodData& rods, Mode mode = Mode::ale);

// z_n - z_1, or 1 for a single nut
double data_scale(const RodData& rods);

struct InteriorLimits {
    double rho_min_factor = 1e-8;
    double nut_radius_factor = 1e-6;
};

// Throws AxisEvaluationError / DomainError for axis or near-nut points.
void check_interior(const RodData& rods, double rho, double zeta, const InteriorLimits& lim = {});

struct AxisProfile {
    std::vector<double> f_slopes;  // rods I_0..I_n
    std::vector<double> f_values;  // f(z_i), i = 1..n (stored 0-based)
    std::function<double(double)> g_fn;
    std::vector<Nut> nuts;

    double f(double zeta) const;
    double f_prime(double zeta) const;
    // d^2V/dzeta^2 on the axis away from nuts
    double vzz(double zeta) const;
};

Jet v0_jet(double rho, double zeta, int order = 4);
Jet h0_jet(double rho, double zeta, int order = 4);

Jet build_v(const RodData& rods, double rho, double zeta, int order = 4);
Jet build_h(const RodData& rods, double rho, double zeta, int order, double gauge_constant);

// artanh(zeta/R) in a form that stays accurate as zeta/R -> +-1
Jet artanh_ratio(const Jet& rho, const Jet& zeta);

std::pair<double, double> ward_coords(const RodData& rods, double rho, double zeta);

struct WardJets {
    Jet z;
    Jet x;
};
WardJets ward_jets(const RodData& rods, double rho, double zeta, int order);

struct InverseOptions {
    int max_iterations = 100;
    double tolerance = 1e-12;
};

std::pair<double, double> ward_inverse(const RodData& rods, double z, double x,
                                       std::pair<double, double> guess,
                                       const InverseOptions& opt = {});

// rho and zeta as jets in (z, x) at the given image point
std::pair<Jet, Jet> ward_inverse_jets(const RodData& rods, double z, double x,
                                      std::pair<double, double> guess, int order);

// |u_xx + (e^u)_zz| with u = 2 log rho(z, x)
double toda_residual(const RodData& rods, double z, double x,
                     std::optional<std::pair<double, double>> guess = std::nullopt);

AxisProfile axis_profile(const RodData& rods);

// H on the axis: sum a_i (zeta - z_i)|zeta - z_i| + constant
double axis_h(const RodData& rods, double zeta, double gauge_constant);

// Resolves the rod data's gauge choice to a numeric constant.
double gauge_constant(const RodData& rods);
double symmetric_gauge_constant(const RodData& rods);

}  // namespace todkit
