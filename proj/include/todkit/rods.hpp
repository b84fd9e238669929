#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "todkit/harmonic.hpp"

namespace todkit {

using Rational = boost::multiprecision::cpp_rational;

using ExactRodData = BasicRodData<Rational>;

// doubles are binary fractions, so the conversion is exact
ExactRodData to_exact(const RodData& rods);
RodData to_double(const ExactRodData& rods);
// "0.25", "-1/16", "3e-2"
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

template <typename T>
using Pair = std::array<T, 2>;

template <typename T>
struct BasicRodStructure {
    std::vector<T> turning_points;
    std::vector<T> slopes;                  // f'_i, rods I_0..I_n
    std::vector<T> values;                  // f_i, turning points 1..n
    std::vector<std::optional<T>> F;        // F_i where f'_i != 0
    std::vector<Pair<T>> rod_vectors;       // (d_tau, d_y) components
    std::vector<Pair<T>> lattice;           // in the basis with v_0 = (0,1), v_1 = (1,0)
    bool lattice_integral = false;
    std::vector<Pair<long long>> lattice_vectors;  // filled when integral
    T gauge_constant;
};

using RodStructure = BasicRodStructure<double>;
using ExactRodStructure = BasicRodStructure<Rational>;

RodStructure rod_vectors(const RodData& rods);
ExactRodStructure rod_vectors(const ExactRodData& rods);

// rebuilds the lattice data from turning points and real rod vectors
RodStructure make_structure(std::vector<double> turning_points, std::vector<Pair<double>> rod_vectors);
ExactRodStructure make_structure(std::vector<Rational> turning_points, std::vector<Pair<Rational>> rod_vectors);

template <typename T>
struct Gl2zRelation {
    int j;          // turning point index, 1-based
    T l_raw;        // v_{j-1} + eps v_{j+1} = l v_j
    T eps_raw;
    bool integral;
    long long l = 0;
    int eps = 0;
    std::string violation{};
};

std::vector<Gl2zRelation<double>> gl2z_compatibility(const RodStructure& s, double tol = 1e-9);
std::vector<Gl2zRelation<Rational>> gl2z_compatibility(const ExactRodStructure& s);

struct LensLabel {
    bool ale = false;
    long long p = 0;
    long long q = 0;
    std::string note;
};

LensLabel asymptotic_class(const RodStructure& s, double tol = 1e-9);
LensLabel asymptotic_class(const ExactRodStructure& s);

template <typename T>
struct FJump {
    int from_rod;
    int to_rod;
    T value;
};

// jump of F across turning point i (1-based); bridges a zero-slope rod
FJump<double> f_jump(const RodData& rods, int i);
FJump<Rational> f_jump(const ExactRodData& rods, int i);

// F at a point near the axis from the interior formulas
double f_near_axis(const RodData& rods, double rho, double zeta);

// W on a rod with f' != 0 from the axis expansion
double axis_w(const RodData& rods, double zeta);

// a point on the axis inside rod I_i
double rod_midpoint(const RodData& rods, int rod_index);

struct ConicalResult {
    double limit = 0;
    std::vector<double> rho;
    std::vector<double> raw;
    bool converged = false;
};

// |d|v|^2|^2 / (4|v|^2) as rho -> 0, extrapolated in rho^2;
// scale multiplies the normalized rod vector
ConicalResult conical_check(const RodData& rods, int rod_index, std::vector<double> rho_samples = {},
                            double scale = 1.0);

}  // namespace todkit
