#pragma once

#include <array>
#include <optional>

#include "todkit/geometry.hpp"

namespace todkit {

using Vec4 = std::array<double, 4>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Tensor3 = std::array<Mat4, 4>;
using Tensor4 = std::array<Tensor3, 4>;

struct CurvaturePack {
    Mat4 g{};
    Mat4 ginv{};
    Tensor3 christoffel{};  // Gamma^a_bc
    Tensor4 riemann{};      // R_abcd
    Mat4 ricci{};
    double scalar = 0;
    Tensor4 weyl{};
    double volume = 0;  // sqrt(det g) times the orientation sign
    int orientation = 1;
};

// Killing-direction derivatives are structurally zero; needs 2-jets.
CurvaturePack curvature_pack(const MetricJet& metric, int orientation = 1);

// full contractions with the inverse metric
double norm(const Tensor4& t, const Mat4& ginv);
double norm(const Mat4& t, const Mat4& ginv);

struct SymmetryResiduals {
    double antisymmetry;
    double pair_symmetry;
    double bianchi;
    double weyl_trace;
};
SymmetryResiduals symmetry_residuals(const CurvaturePack& pack);

// rows are the orthonormal vectors E_A = E_A^a d_a, Gram-Schmidt on
// (d_0, d_1, d_2, d_3), last vector flipped to match the orientation
std::array<Vec4, 4> orthonormal_frame(const Mat4& g, int orientation);

struct WeylSplit {
    Mat3 sd{};
    Mat3 asd{};
    std::array<double, 3> sd_eigenvalues{};
    std::array<double, 3> asd_eigenvalues{};
    // simple eigenvalue of the self-dual part, when the spectrum has one
    std::optional<double> lambda;
};

WeylSplit weyl_split(const CurvaturePack& pack);

// index patterns of the self-dual and anti-self-dual frame bases
std::array<Mat4, 3> selfdual_pattern();
std::array<Mat4, 3> antiselfdual_pattern();

// Delta f = -g^{ab} nabla_a nabla_b f (positive spectrum convention)
double scalar_laplacian(const MetricJet& metric, const Jet& field);
// -(1/sqrt g) d_a (sqrt g g^{ab} d_b f)
double divergence_laplacian(const MetricJet& metric, const Jet& field);

struct CkyResult {
    double residual = 0;            // |L(Z)|
    double gradient_norm = 0;       // |nabla Z|
    Vec4 xi_lower{};                // xi_a = (1/3) nabla^b Z_ab
    Vec4 xi{};                      // raised
    std::optional<double> killing;  // |nabla_(a xi_b)|, when Z carries 2-jets
};

CkyResult cky_residual(const MetricJet& metric, const TwoFormJet& Z);

// Z_ab Z^ab
double two_form_norm2(const Mat4& Z, const Mat4& ginv);

Mat4 inverse(const Mat4& g);

}  // namespace todkit
