#pragma once

#include <string>
#include <utility>
#include <vector>

#include "todkit/io.hpp"

namespace todkit {

enum class Suite { fields, curvature, rods, cky, all };
Suite parse_suite(const std::string& s);
std::string to_string(Suite s);

struct Tolerances {
    double identity = 1e-12;
    double ricci = 1e-7;
    double weyl = 1e-7;
    double laplacian = 1e-8;
    double cky = 1e-8;
    double conical = 1e-6;
    double toda = 1e-8;
};

// interior sample points spread over the nut region, nut exclusions removed
std::vector<std::pair<double, double>> sample_points(const RodData& rods);

VerificationReport verify(const RodFile& input, Suite suite, const Tolerances& tol = {});

}  // namespace todkit
