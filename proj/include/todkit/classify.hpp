#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "todkit/rods.hpp"

namespace todkit {

struct SlopeData {
    int n = 0;
    std::vector<Rational> slopes;  // f'_0 .. f'_n
    std::vector<Rational> values;  // f_1 .. f_n
    std::vector<long long> levels; // l_1 .. l_{n-1}
    std::vector<int> signs;        // eps_1 .. eps_{n-1}
    std::vector<Rational> gaps;    // z_{i+1} - z_i, i = 1 .. n-1
};

SlopeData slope_data(const ExactRodData& rods);

// residuals of the rod-vector relation at turning point j (1 <= j <= n-1):
// first the d_y component, then the d_tau component after F elimination,
// or the rod-length equation when f'_j = 0
std::pair<Rational, Rational> regularity_residuals(const SlopeData& data, int j);

// endpoints may be infinite; open endpoints are excluded
struct Bound {
    std::optional<Rational> value;  // nullopt = infinite
    bool open = true;
};

struct Interval {
    Bound lo;
    Bound hi;

    static Interval point(const Rational& v);
    static Interval open(std::optional<Rational> lo, std::optional<Rational> hi);
    static Interval all();

    bool empty() const;
    bool bounded() const;
    std::string str() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);  // b must exclude 0
Interval intersect(const Interval& a, const Interval& b);
std::vector<long long> integers_in(const Interval& x);

enum class Asymptotics { ale, af };

struct Certificate {
    std::string branch;
    std::string reason;
};

struct Family {
    int n = 0;
    std::string branch;
    std::vector<std::string> slopes;   // exact or symbolic
    std::vector<Rational> weights;     // empty when the family is not a point
    std::vector<long long> levels;
    std::vector<int> signs;
    std::vector<Pair<long long>> lattice;
    LensLabel lens;
    std::string note;
};

struct ClassificationReport {
    std::vector<Family> admissible;
    std::vector<Family> informational;  // rejected for ALE, compatible with AF
    std::vector<Certificate> certificates;
    int branches = 0;
    bool consulted_l_bound = false;
};

ClassificationReport search_admissible(int n_max, int l_bound, Asymptotics mode = Asymptotics::ale);

struct DegeneracyReport {
    double max_abs_w = 0;
    double scale = 0;
    int samples = 0;
    bool degenerate = false;
};

// W sampled on a grid through the potential formulas
DegeneracyReport verify_n1_degenerate(const RodData& rods, int grid = 12);

}  // namespace todkit
