#include <doctest.h>

#include "fd_oracle.hpp"

TEST_CASE("differences of polynomials") {
    const oracle::Field f = [](double x, double y) { return x * x * x * y + 2 * y * y - x; };
    CHECK(oracle::partial(f, 1.5, -0.5, 1, 0, 1e-2) == doctest::Approx(3 * 2.25 * -0.5 - 1).epsilon(1e-11));
    CHECK(oracle::partial(f, 1.5, -0.5, 0, 1, 1e-2) == doctest::Approx(3.375 - 2).epsilon(1e-11));
    CHECK(oracle::partial(f, 1.5, -0.5, 2, 0, 1e-2) == doctest::Approx(6 * 1.5 * -0.5).epsilon(1e-9));
    CHECK(oracle::partial(f, 1.5, -0.5, 1, 1, 1e-2) == doctest::Approx(3 * 2.25).epsilon(1e-9));
    CHECK(oracle::partial(f, 1.5, -0.5, 0, 2, 1e-2) == doctest::Approx(4).epsilon(1e-9));
}

TEST_CASE("closed forms at worked points") {
    CHECK(oracle::v0(3, 4) == doctest::Approx(10 - 4 * std::log(9.0)).epsilon(1e-14));
    CHECK(oracle::h0(3, 4) == doctest::Approx(20 + 4.5 * std::log(9.0)).epsilon(1e-14));
    CHECK(oracle::v0(2.5, 0) == doctest::Approx(5.0));
    const oracle::Rods eh{-1.0 / 16, {{-0.25, 0.5}, {0.25, 0.5}}};
    const auto f = oracle::fields(eh, std::sqrt(3.0) / 4, 0, 0);
    CHECK(f.W == doctest::Approx(8.0 / 3).epsilon(1e-13));
    CHECK(f.z == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("oracle curvature") {
    // flat space in polar form: dr^2 + r^2 dphi^2 + dt^2 + dx^2 with phi, t Killing
    const oracle::MetricFn flat = [](double r, double) {
        oracle::Mat4 g{};
        g[0][0] = r * r;
        g[1][1] = 1;
        g[2][2] = 1;
        g[3][3] = 1;
        return g;
    };
    const auto c = oracle::curvature(flat, 1.3, 0.2, 1e-2);
    double m = 0;
    for (const auto& a : c.riemann)
        for (const auto& b : a)
            for (const auto& d : b)
                for (double v : d) m = std::max(m, std::abs(v));
    CHECK(m < 1e-9);

    // round 2-sphere of radius 2 times a flat plane: R_{theta phi theta phi} = 4 sin^2
    const oracle::MetricFn sphere = [](double, double th) {
        oracle::Mat4 g{};
        g[0][0] = 4 * std::sin(th) * std::sin(th);
        g[1][1] = 1;
        g[2][2] = 1;
        g[3][3] = 4;
        return g;
    };
    const auto s = oracle::curvature(sphere, 0.0, 0.9, 1e-2);
    // scalar = 2/R^2 = 1/2; Ricci_theta,theta = 1
    CHECK(s.ricci[3][3] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.ricci[0][0] == doctest::Approx(std::sin(0.9) * std::sin(0.9)).epsilon(1e-8));
}

TEST_CASE("Eguchi-Hanson is Ricci flat to the oracle") {
    const oracle::MetricFn eh = [](double r, double th) { return oracle::eh_metric(1.0, r, th); };
    const auto c = oracle::curvature(eh, 1.7, 1.1, 1e-2);
    double rm = 0, ric = 0;
    for (const auto& a : c.riemann)
        for (const auto& b : a)
            for (const auto& d : b)
                for (double v : d) rm = std::max(rm, std::abs(v));
    for (const auto& row : c.ricci)
        for (double v : row) ric = std::max(ric, std::abs(v));
    CHECK(rm > 1e-2);
    CHECK(ric / rm < 1e-8);
}

TEST_CASE("PD line element") {
    // roots (-2, -1/2, 1/2, 2) give flat space
    const oracle::MetricFn g = [](double p, double q) { return oracle::pd_metric({-2, -0.5, 0.5, 2}, 1.0, p, q); };
    const auto c = oracle::curvature(g, 0.1, -1.0, 1e-2);
    double m = 0;
    for (const auto& a : c.riemann)
        for (const auto& b : a)
            for (const auto& d : b)
                for (double v : d) m = std::max(m, std::abs(v));
    CHECK(m < 1e-8);
    const oracle::MetricFn h = [](double p, double q) { return oracle::pd_metric({0.2, 0.4, 2.0, 6.25}, 1.0, p, q); };
    const auto r = oracle::curvature(h, 1.0, 0.3, 1e-2);
    double rm = 0, ric = 0;
    for (const auto& a : r.riemann)
        for (const auto& b : a)
            for (const auto& d : b)
                for (double v : d) rm = std::max(rm, std::abs(v));
    for (const auto& row : r.ricci)
        for (double v : row) ric = std::max(ric, std::abs(v));
    CHECK(rm > 1e-3);
    CHECK(ric / rm < 1e-7);
}
