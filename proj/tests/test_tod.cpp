#include <doctest.h>

#include <random>

#include "jet_check.hpp"
#include "todkit/classify.hpp"
#include "todkit/curvature.hpp"
#include "todkit/errors.hpp"
#include "todkit/tod.hpp"

using namespace todkit;

namespace {

oracle::Rods to_oracle(const RodData& r) {
    oracle::Rods o{r.c, {}};
    for (const auto& n : r.nuts) o.nuts.push_back({n.z, n.a});
    return o;
}

RodData three_nut() {
    RodData r;
    r.c = -0.3;
    r.nuts = {{-1.0, 0.2}, {0.1, 0.5}, {0.9, 0.3}};
    return r;
}

}  // namespace

TEST_CASE("Eguchi-Hanson worked point") {
    const RodData eh = eh_rod_data(1.0);
    CHECK(eh.c == -1.0 / 16);
    const double rho = std::sqrt(3.0) / 4;
    const TodFields f = tod_fields(eh, rho, 0, 2);
    CHECK(f.W.value() == doctest::Approx(8.0 / 3).epsilon(1e-14));
    CHECK(f.F.value() == doctest::Approx(0).scale(1));
    CHECK(f.z.value() == doctest::Approx(0.5).epsilon(1e-15));
    const MetricJet m = tod_metric(eh, rho, 0, 2);
    CHECK(m.g[0][0].value() == doctest::Approx(3.0 / 8).epsilon(1e-14));
    const auto [r0, z0] = eh_coords(1.0, std::sqrt(2.0), M_PI / 2);
    CHECK(r0 == doctest::Approx(rho).epsilon(1e-15));
    CHECK(z0 == doctest::Approx(0).scale(1));
    CHECK(eh_closed_form(1.0, std::sqrt(2.0), M_PI / 2, 0).g[0][0].value() == doctest::Approx(3.0 / 8));
}

TEST_CASE("stable fields match the potential formulas and the oracle") {
    const RodData r = three_nut();
    const oracle::Rods o = to_oracle(r);
    const double C = gauge_constant(r);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.1, 2.0), uz(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        const double rho = ur(rng), zeta = uz(rng);
        const TodFields a = tod_fields(r, rho, zeta, 2), b = tod_fields_from_potential(r, rho, zeta, 2);
        const oracle::Fields c = oracle::fields(o, rho, zeta, C);
        CHECK(a.W.value() == doctest::Approx(c.W).epsilon(1e-11));
        CHECK(a.F.value() == doctest::Approx(c.F).epsilon(1e-10).scale(1));
        CHECK(a.e2nu.value() == doctest::Approx(c.e2nu).epsilon(1e-11));
        CHECK(a.z.value() == doctest::Approx(c.z).epsilon(1e-13));
        for (int d = 0; d <= 2; ++d)
            for (int q = 0; q <= d; ++q) {
                CHECK(a.W(d - q, q) == doctest::Approx(b.W(d - q, q)).epsilon(1e-8).scale(1e-6));
                CHECK(a.F(d - q, q) == doctest::Approx(b.F(d - q, q)).epsilon(1e-8).scale(1e-6));
            }
        const oracle::Field fw = [&](double x, double y) { return oracle::fields(o, x, y, C).W; };
        const oracle::Field ff = [&](double x, double y) { return oracle::fields(o, x, y, C).F; };
        const double h = 3e-2 * std::min(rho, 0.5);
        CHECK(jetcheck::against_values(fw, a.W, rho, zeta, h) < 1e-6);
        CHECK(jetcheck::against_values(ff, a.F, rho, zeta, h) < 1e-6);
    }
}

TEST_CASE("single nut gives W = 0") {
    RodData one;
    one.c = -1;
    one.nuts = {{0, 1}};
    const DegeneracyReport d = verify_n1_degenerate(one);
    CHECK(d.degenerate);
    CHECK(d.max_abs_w < 1e-12 * d.scale);
    one.c = -7;
    CHECK(verify_n1_degenerate(one).degenerate);
    CHECK_THROWS_AS(tod_metric(one, 0.5, 0.5, 2), DegenerateMetricError);
    CHECK(std::abs(tod_fields(eh_rod_data(1.0), std::sqrt(3.0) / 4, 0, 0).W.value()) > 0);
}

TEST_CASE("W through the Toda route") {
    const RodData r = three_nut();
    for (auto [rho, zeta] : {std::pair{0.3, 0.2}, std::pair{1.1, -0.8}, std::pair{0.6, 1.4}})
        CHECK(w_from_toda(r, rho, zeta) == doctest::Approx(tod_fields(r, rho, zeta, 0).W.value()).epsilon(1e-8));
}

TEST_CASE("Gram determinant and positivity") {
    const RodData eh = eh_rod_data(1.0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ur(0.02, 2.0), uz(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        const double rho = ur(rng), zeta = uz(rng);
        const Mat4 g = tod_metric(eh, rho, zeta, 0).values();
        CHECK(g[0][0] * g[1][1] - g[0][1] * g[0][1] == doctest::Approx(rho * rho).epsilon(1e-12));
        CHECK(g[0][0] > 0);
        CHECK(g[2][2] > 0);
        CHECK(tod_fields(eh, rho, zeta, 0).W.value() > 0);
    }
}

TEST_CASE("fundamental form") {
    const RodData r = three_nut();
    for (auto [rho, zeta] : {std::pair{0.3, 0.2}, std::pair{1.1, -0.8}}) {
        const MetricJet m = tod_metric(r, rho, zeta, 1);
        const Mat4 gi = inverse(m.values());
        const Mat4 w = fundamental_form(r, rho, zeta, 1).values();
        CHECK(two_form_norm2(w, gi) == doctest::Approx(4.0).epsilon(1e-12));
        Mat4 J{};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) J[a][b] += gi[a][c] * w[c][b];
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double s = a == b ? 1 : 0;
                for (int c = 0; c < 4; ++c) s += J[a][c] * J[c][b];
                CHECK(std::abs(s) < 1e-10);
            }
        CHECK(tod_orientation(r, rho, zeta) == 1);
    }
}

TEST_CASE("Eguchi-Hanson equivalence through eh_coords") {
    const RodData eh = eh_rod_data(1.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ur(1.05, 4.0), ut(0.1, 3.0);
    for (int k = 0; k < 30; ++k) {
        const double r = ur(rng), th = ut(rng);
        const auto [rho, zeta] = eh_coords(1.0, r, th);
        const Mat4 t = tod_metric(eh, rho, zeta, 0).values();
        const Mat4 e = eh_closed_form(1.0, r, th, 0).values();
        CHECK(t[0][0] == doctest::Approx(e[0][0]).epsilon(1e-10));
        CHECK(t[0][1] == doctest::Approx(e[0][1]).epsilon(1e-10).scale(1e-3));
        CHECK(t[1][1] == doctest::Approx(e[1][1]).epsilon(1e-10));
        // 2D block through the Jacobian
        const auto J = eh_coords_jets(1.0, r, th, 1);
        const double rr = J.first(1, 0), rt = J.first(0, 1), zr = J.second(1, 0), zt = J.second(0, 1);
        CHECK(t[2][2] * (rr * rr + zr * zr) == doctest::Approx(e[2][2]).epsilon(1e-10));
        CHECK(t[2][2] * (rt * rt + zt * zt) == doctest::Approx(e[3][3]).epsilon(1e-10));
        CHECK(std::abs(t[2][2] * (rr * rt + zr * zt)) < 1e-10 * e[2][2]);
        const oracle::Mat4 o = oracle::eh_metric(1.0, r, th);
        CHECK(e[1][1] == doctest::Approx(o[1][1]).epsilon(1e-14));
    }
    CHECK_THROWS_AS(eh_coords(1.0, 0.9, 1.0), DomainError);
    CHECK_THROWS_AS(eh_closed_form(1.0, 2.0, 0.0, 2), DomainError);
}

TEST_CASE("axis limits of eh_coords") {
    const auto a = eh_coords(1.0, 2.0, 1e-9);
    CHECK(a.first < 1e-8);
    CHECK(a.second == doctest::Approx(1.0));
    const auto b = eh_coords(1.0, 1.0 + 1e-12, 0.7);
    CHECK(b.first < 1e-5);
    CHECK(std::abs(b.second) < 0.25);
}

TEST_CASE("rescaling") {
    const RodData r = three_nut();
    const RodData same = rescale(r, 1.0);
    CHECK(same.c == r.c);
    CHECK(same.nuts[1].z == r.nuts[1].z);
    const double alpha = 2.5;
    const RodData s = rescale(r, alpha);
    for (auto [rho, zeta] : {std::pair{0.3, 0.2}, std::pair{1.1, -0.8}}) {
        CHECK(tod_fields(s, alpha * rho, alpha * zeta, 0).W.value() ==
              doctest::Approx(tod_fields(r, rho, zeta, 0).W.value()).epsilon(1e-12));
        const Mat4 g = tod_metric(r, rho, zeta, 0).values(), h = tod_metric(s, alpha * rho, alpha * zeta, 0).values();
        // tau -> alpha tau, rho -> alpha rho, zeta -> alpha zeta, y fixed
        CHECK(h[0][0] * alpha * alpha == doctest::Approx(alpha * alpha * g[0][0]).epsilon(1e-12));
        CHECK(h[1][1] == doctest::Approx(alpha * alpha * g[1][1]).epsilon(1e-12));
        CHECK(h[0][1] * alpha == doctest::Approx(alpha * alpha * g[0][1]).epsilon(1e-10).scale(1e-6));
        CHECK(h[2][2] * alpha * alpha == doctest::Approx(alpha * alpha * g[2][2]).epsilon(1e-12));
        CHECK(h[0][0] * h[1][1] - h[0][1] * h[0][1] == doctest::Approx(alpha * alpha * rho * rho).epsilon(1e-12));
    }
    CHECK_THROWS_AS(rescale(r, 0.0), InvalidInput);
}

TEST_CASE("fall-off along Eguchi-Hanson rays") {
    const RodData eh = eh_rod_data(1.0);
    for (double th : {0.5, 1.4, 2.6}) {
        std::vector<double> lx, ly;
        for (double r : {1e2, 1e3, 1e4}) {
            const auto [rho, zeta] = eh_coords(1.0, r, th);
            const double z = tod_fields(eh, rho, zeta, 0).z.value();
            CHECK(z * 4 / (r * r) == doctest::Approx(1.0).epsilon(1e-3));
            lx.push_back(std::log(r));
            ly.push_back(std::log(tod_fields(eh, rho, zeta, 0).W.value()));
        }
        CHECK((ly[2] - ly[0]) / (lx[2] - lx[0]) == doctest::Approx(-2.0).epsilon(0.005));
    }
}
