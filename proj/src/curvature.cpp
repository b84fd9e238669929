#include "todkit/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace todkit {

namespace {

using JetMat = std::array<std::array<Jet, 4>, 4>;
using JetT3 = std::array<JetMat, 4>;

// partial derivative along chart index k (Killing directions give zero)
Jet partial(const Jet& f, int k) {
    if (k < 2) return Jet(f.order() - 1);
    return f.derivative(k - 2);
}

struct Connection {
    int order;  // order of the Christoffel jets
    Mat4 ginv;
    JetMat ginv_jet;  // order 1
    JetT3 gamma;      // Gamma^a_bc
};

Connection connection(const MetricJet& m) {
    const int n = m.order();
    if (n < 1) throw InvalidInput("the connection needs at least 1-jets of the metric");
    Connection c;
    c.order = std::min(n - 1, 1);
    const Mat4 gv = m.values();
    c.ginv = inverse(gv);
    std::array<Mat4, 4> dg{};
    for (int k = 2; k < 4; ++k)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) dg[k][a][b] = m.g[a][b](k == 2 ? 1 : 0, k == 3 ? 1 : 0);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            Jet j = Jet::constant(c.ginv[a][b], 1);
            for (int k = 2; k < 4; ++k) {
                double s = 0;
                for (int p = 0; p < 4; ++p)
                    for (int q = 0; q < 4; ++q) s -= c.ginv[a][p] * dg[k][p][q] * c.ginv[q][b];
                j(k == 2 ? 1 : 0, k == 3 ? 1 : 0) = s;
            }
            c.ginv_jet[a][b] = j.truncated(c.order);
        }
    JetT3 first;  // Gamma_dbc
    for (int d = 0; d < 4; ++d)
        for (int b = 0; b < 4; ++b)
            for (int e = 0; e < 4; ++e)
                first[d][b][e] =
                    (0.5 * (partial(m.g[d][e], b) + partial(m.g[d][b], e) - partial(m.g[b][e], d))).truncated(c.order);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int e = 0; e < 4; ++e) {
                Jet s(c.order);
                for (int d = 0; d < 4; ++d) s += c.ginv_jet[a][d] * first[d][b][e];
                c.gamma[a][b][e] = s;
            }
    return c;
}

Eigen::Matrix4d to_eigen(const Mat4& m) {
    Eigen::Matrix4d e;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) e(a, b) = m[a][b];
    return e;
}

std::array<double, 3> eigenvalues(const Mat3& m) {
    Eigen::Matrix3d e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e(i, j) = 0.5 * (m[i][j] + m[j][i]);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(e, Eigen::EigenvaluesOnly);
    const auto v = solver.eigenvalues();
    return {v(0), v(1), v(2)};
}

Mat3 project(const Tensor4& C, const std::array<Vec4, 4>& E, const std::array<Mat4, 3>& basis) {
    Tensor4 f{};
    for (int A = 0; A < 4; ++A)
        for (int B = 0; B < 4; ++B)
            for (int Cc = 0; Cc < 4; ++Cc)
                for (int D = 0; D < 4; ++D) {
                    double s = 0;
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b < 4; ++b)
                            for (int c = 0; c < 4; ++c)
                                for (int d = 0; d < 4; ++d)
                                    s += E[A][a] * E[B][b] * E[Cc][c] * E[D][d] * C[a][b][c][d];
                    f[A][B][Cc][D] = s;
                }
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int A = 0; A < 4; ++A)
                for (int B = 0; B < 4; ++B)
                    for (int Cc = 0; Cc < 4; ++Cc)
                        for (int D = 0; D < 4; ++D) s += f[A][B][Cc][D] * basis[i][A][B] * basis[j][Cc][D];
            m[i][j] = s / 8;
        }
    return m;
}

Mat4 pattern(int a, int b, int c, int d, double sign) {
    Mat4 m{};
    m[a][b] = 1;
    m[b][a] = -1;
    m[c][d] += sign;
    m[d][c] -= sign;
    return m;
}

}  // namespace

Mat4 inverse(const Mat4& g) {
    const Eigen::Matrix4d e = to_eigen(g);
    Eigen::FullPivLU<Eigen::Matrix4d> lu(e);
    if (!lu.isInvertible()) throw DegenerateMetricError("metric is singular at this point");
    const Eigen::Matrix4d inv = lu.inverse();
    Mat4 r{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) r[a][b] = inv(a, b);
    return r;
}

CurvaturePack curvature_pack(const MetricJet& metric, int orientation) {
    if (metric.order() < 2) throw InvalidInput("curvature needs 2-jets of the metric");
    CurvaturePack p;
    p.orientation = orientation >= 0 ? 1 : -1;
    p.g = metric.values();
    const double det = to_eigen(p.g).determinant();
    if (!(det > 0)) throw DegenerateMetricError("metric is not positive definite (det = " + detail::fmt(det) + ")");
    const Connection c = connection(metric);
    p.ginv = c.ginv;
    p.volume = p.orientation * std::sqrt(det);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int e = 0; e < 4; ++e) p.christoffel[a][b][e] = c.gamma[a][b][e].value();
    const auto& G = p.christoffel;
    Tensor4 up{};  // R^a_bcd
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int cc = 0; cc < 4; ++cc)
                for (int d = 0; d < 4; ++d) {
                    double s = 0;
                    if (cc >= 2) s += c.gamma[a][d][b].coeff(cc == 2, cc == 3);
                    if (d >= 2) s -= c.gamma[a][cc][b].coeff(d == 2, d == 3);
                    for (int e = 0; e < 4; ++e) s += G[a][cc][e] * G[e][d][b] - G[a][d][e] * G[e][cc][b];
                    up[a][b][cc][d] = s;
                }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int cc = 0; cc < 4; ++cc)
                for (int d = 0; d < 4; ++d) {
                    double s = 0;
                    for (int e = 0; e < 4; ++e) s += p.g[a][e] * up[e][b][cc][d];
                    p.riemann[a][b][cc][d] = s;
                }
    for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d) {
            double s = 0;
            for (int a = 0; a < 4; ++a) s += up[a][b][a][d];
            p.ricci[b][d] = s;
        }
    p.scalar = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) p.scalar += p.ginv[a][b] * p.ricci[a][b];
    const auto& g = p.g;
    const auto& R = p.ricci;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int cc = 0; cc < 4; ++cc)
                for (int d = 0; d < 4; ++d)
                    p.weyl[a][b][cc][d] =
                        p.riemann[a][b][cc][d] -
                        0.5 * (g[a][cc] * R[b][d] - g[a][d] * R[b][cc] - g[b][cc] * R[a][d] + g[b][d] * R[a][cc]) +
                        p.scalar / 6 * (g[a][cc] * g[b][d] - g[a][d] * g[b][cc]);
    return p;
}

double norm(const Tensor4& t, const Mat4& ginv) {
    // raise one index at a time
    Tensor4 a = t, b{};
    for (int slot = 0; slot < 4; ++slot) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l) {
                        std::array<int, 4> idx{i, j, k, l};
                        double s = 0;
                        for (int m = 0; m < 4; ++m) {
                            auto src = idx;
                            src[static_cast<std::size_t>(slot)] = m;
                            s += ginv[idx[static_cast<std::size_t>(slot)]][m] * a[src[0]][src[1]][src[2]][src[3]];
                        }
                        b[i][j][k][l] = s;
                    }
        a = b;
    }
    double s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) s += a[i][j][k][l] * t[i][j][k][l];
    return std::sqrt(std::abs(s));
}

double norm(const Mat4& t, const Mat4& ginv) {
    double s = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) s += ginv[a][c] * ginv[b][d] * t[a][b] * t[c][d];
    return std::sqrt(std::abs(s));
}

double two_form_norm2(const Mat4& Z, const Mat4& ginv) {
    double s = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) s += ginv[a][c] * ginv[b][d] * Z[a][b] * Z[c][d];
    return s;
}

SymmetryResiduals symmetry_residuals(const CurvaturePack& p) {
    SymmetryResiduals r{0, 0, 0, 0};
    const auto& R = p.riemann;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    r.antisymmetry = std::max({r.antisymmetry, std::abs(R[a][b][c][d] + R[b][a][c][d]),
                                               std::abs(R[a][b][c][d] + R[a][b][d][c])});
                    r.pair_symmetry = std::max(r.pair_symmetry, std::abs(R[a][b][c][d] - R[c][d][a][b]));
                    r.bianchi = std::max(r.bianchi, std::abs(R[a][b][c][d] + R[a][c][d][b] + R[a][d][b][c]));
                }
    for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d) {
            double s = 0;
            for (int a = 0; a < 4; ++a)
                for (int c = 0; c < 4; ++c) s += p.ginv[a][c] * p.weyl[a][b][c][d];
            r.weyl_trace = std::max(r.weyl_trace, std::abs(s));
        }
    return r;
}

std::array<Vec4, 4> orthonormal_frame(const Mat4& g, int orientation) {
    std::array<Vec4, 4> E{};
    auto dot = [&](const Vec4& u, const Vec4& v) {
        double s = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) s += g[a][b] * u[a] * v[b];
        return s;
    };
    for (int A = 0; A < 4; ++A) {
        Vec4 v{};
        v[A] = 1;
        for (int B = 0; B < A; ++B) {
            const double k = dot(v, E[B]);
            for (int a = 0; a < 4; ++a) v[a] -= k * E[B][a];
        }
        const double n2 = dot(v, v);
        if (!(n2 > 0)) throw DegenerateMetricError("Gram-Schmidt met a null direction");
        for (auto& x : v) x /= std::sqrt(n2);
        E[A] = v;
    }
    Eigen::Matrix4d m;
    for (int A = 0; A < 4; ++A)
        for (int a = 0; a < 4; ++a) m(A, a) = E[A][a];
    if (m.determinant() * orientation < 0)
        for (auto& x : E[3]) x = -x;
    return E;
}

std::array<Mat4, 3> selfdual_pattern() {
    return {pattern(0, 1, 2, 3, 1), pattern(1, 2, 0, 3, 1), pattern(1, 3, 0, 2, -1)};
}

std::array<Mat4, 3> antiselfdual_pattern() {
    return {pattern(0, 1, 2, 3, -1), pattern(1, 2, 0, 3, -1), pattern(1, 3, 0, 2, 1)};
}

WeylSplit weyl_split(const CurvaturePack& pack) {
    const auto E = orthonormal_frame(pack.g, pack.orientation);
    WeylSplit w;
    w.sd = project(pack.weyl, E, selfdual_pattern());
    w.asd = project(pack.weyl, E, antiselfdual_pattern());
    w.sd_eigenvalues = eigenvalues(w.sd);
    w.asd_eigenvalues = eigenvalues(w.asd);
    const auto& e = w.sd_eigenvalues;
    const double spread = e[2] - e[0];
    if (!(spread > 0)) return w;
    const double low = e[1] - e[0], high = e[2] - e[1];
    // the double pair must be much tighter than the gap to the simple value
    if (low < 1e-3 * high) w.lambda = e[2];
    else if (high < 1e-3 * low) w.lambda = e[0];
    return w;
}

double scalar_laplacian(const MetricJet& metric, const Jet& field) {
    if (field.order() < 2) throw InvalidInput("the Laplacian needs 2-jets of the field");
    const Connection c = connection(metric);
    double s = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double h = 0;
            if (a >= 2 && b >= 2) h = field.coeff((a == 2) + (b == 2), (a == 3) + (b == 3));
            for (int k = 2; k < 4; ++k) h -= c.gamma[k][a][b].value() * field.coeff(k == 2, k == 3);
            s += c.ginv[a][b] * h;
        }
    return -s;
}

double divergence_laplacian(const MetricJet& metric, const Jet& field) {
    if (field.order() < 2) throw InvalidInput("the Laplacian needs 2-jets of the field");
    const Connection c = connection(metric);
    // det g from the permutation expansion, as a 1-jet
    static constexpr int perms[24][4] = {
        {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1},
        {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}, {1, 3, 2, 0},
        {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0},
        {3, 0, 1, 2}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0}};
    Jet det(1);
    for (const auto& p : perms) {
        int inv = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) inv += p[i] > p[j];
        Jet t = Jet::constant(inv % 2 ? -1.0 : 1.0, 1);
        for (int i = 0; i < 4; ++i) t *= metric.g[i][p[i]].truncated(1);
        det += t;
    }
    const Jet vol = sqrt(det);
    double s = 0;
    for (int a = 2; a < 4; ++a) {
        Jet flux(1);
        for (int b = 2; b < 4; ++b) flux += c.ginv_jet[a][b] * partial(field, b).truncated(1);
        s += partial(vol * flux, a).value();
    }
    return -s / vol.value();
}

CkyResult cky_residual(const MetricJet& metric, const TwoFormJet& Z) {
    if (Z.order() < 1) throw InvalidInput("the CKY operator needs 1-jets of the 2-form");
    const Connection c = connection(metric);
    const int n = std::min(Z.order() - 1, c.order);
    // DZ[a][b][e] = nabla_a Z_be
    std::array<JetMat, 4> DZ;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int e = 0; e < 4; ++e) {
                Jet s = partial(Z(b, e), a).truncated(n);
                for (int d = 0; d < 4; ++d)
                    s -= c.gamma[d][a][b].truncated(n) * Z(d, e).truncated(n) +
                         c.gamma[d][a][e].truncated(n) * Z(b, d).truncated(n);
                DZ[a][b][e] = s;
            }
    std::array<Jet, 4> xi;
    for (int a = 0; a < 4; ++a) {
        Jet s(n);
        for (int b = 0; b < 4; ++b)
            for (int d = 0; d < 4; ++d) s += c.ginv_jet[b][d].truncated(n) * DZ[d][a][b];
        xi[a] = s / 3.0;
    }
    CkyResult r;
    const Mat4& gi = c.ginv;
    const Mat4 g = metric.values();
    Tensor3 L{}, D{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int e = 0; e < 4; ++e) {
                const double d = DZ[a][b][e].value();
                const double alt = (d + DZ[b][e][a].value() + DZ[e][a][b].value()) / 3;
                D[a][b][e] = d;
                L[a][b][e] = d - alt + g[a][b] * xi[e].value() - g[a][e] * xi[b].value();
            }
    auto norm3 = [&](const Tensor3& t) {
        double s = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int e = 0; e < 4; ++e) {
                    double up = 0;
                    for (int p = 0; p < 4; ++p)
                        for (int q = 0; q < 4; ++q)
                            for (int u = 0; u < 4; ++u) up += gi[a][p] * gi[b][q] * gi[e][u] * t[p][q][u];
                    s += up * t[a][b][e];
                }
        return std::sqrt(std::abs(s));
    };
    r.residual = norm3(L);
    r.gradient_norm = norm3(D);
    for (int a = 0; a < 4; ++a) {
        r.xi_lower[a] = xi[a].value();
        for (int b = 0; b < 4; ++b) r.xi[b] += gi[b][a] * xi[a].value();
    }
    if (n >= 1) {
        Mat4 K{};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double s = 0.5 * (partial(xi[b], a).value() + partial(xi[a], b).value());
                for (int d = 0; d < 4; ++d) s -= c.gamma[d][a][b].value() * xi[d].value();
                K[a][b] = s;
            }
        r.killing = norm(K, gi);
    }
    return r;
}

}  // namespace todkit
