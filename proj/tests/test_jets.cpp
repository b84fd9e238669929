#include <doctest.h>

#include "jet_check.hpp"
#include "todkit/errors.hpp"
#include "todkit/rods.hpp"

using todkit::Jet;

TEST_CASE("seeds") {
    const Jet a = Jet::seed(0, 2.0, 2);
    CHECK(a(0, 0) == 2.0);
    CHECK(a(1, 0) == 1.0);
    CHECK(a(0, 1) == 0.0);
    CHECK(a(2, 0) == 0.0);
    CHECK(a(1, 1) == 0.0);
    const Jet b = Jet::seed(1, -1.0, 1);
    CHECK(b(0, 0) == -1.0);
    CHECK(b(0, 1) == 1.0);
    CHECK(b(1, 0) == 0.0);
    const Jet c = Jet::seed(0, 0.0, 0);
    CHECK(c.order() == 0);
    CHECK(c.value() == 0.0);
    CHECK_THROWS_AS(Jet(-1), todkit::InvalidInput);
}

TEST_CASE("arithmetic") {
    const Jet x = Jet::seed(0, 2.0, 2);
    const Jet sq = x * x;
    CHECK(sq(0, 0) == 4.0);
    CHECK(sq(1, 0) == 4.0);
    CHECK(sq(2, 0) == 2.0);
    const Jet inv = 1.0 / x;
    CHECK(inv(0, 0) == doctest::Approx(0.5));
    CHECK(inv(1, 0) == doctest::Approx(-0.25));
    CHECK(inv(2, 0) == doctest::Approx(0.25));
    const Jet s = Jet::seed(0, 1.0, 1) + Jet::seed(1, 2.0, 1);
    CHECK(s(0, 0) == 3.0);
    CHECK(s(1, 0) == 1.0);
    CHECK(s(0, 1) == 1.0);
    CHECK_THROWS_AS(1.0 / Jet::seed(0, 0.0, 2), todkit::SingularPointError);
}

TEST_CASE("elementary functions") {
    const Jet l = log(Jet::seed(0, 1.0, 2));
    CHECK(l(0, 0) == 0.0);
    CHECK(l(1, 0) == doctest::Approx(1.0));
    CHECK(l(2, 0) == doctest::Approx(-1.0));
    const Jet r = sqrt(Jet::seed(0, 4.0, 1));
    CHECK(r(0, 0) == doctest::Approx(2.0));
    CHECK(r(1, 0) == doctest::Approx(0.25));
    const Jet t = artanh(Jet::seed(0, 0.0, 1));
    CHECK(t(0, 0) == 0.0);
    CHECK(t(1, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(log(Jet::seed(0, -1.0, 2)), todkit::DomainError);
    CHECK_THROWS_AS(sqrt(Jet::seed(0, -1.0, 2)), todkit::DomainError);
    CHECK_THROWS_AS(artanh(Jet::seed(0, 1.0, 2)), todkit::DomainError);
}

TEST_CASE("multiplication is commutative and associative") {
    const Jet x = Jet::seed(0, 0.7, 4), y = Jet::seed(1, -1.3, 4);
    const Jet a = exp(x * y), b = sin(x) + y * y, c = log(2.0 + x * x) * y;
    const Jet ab = a * b, ba = b * a, l = (a * b) * c, r = a * (b * c);
    for (int d = 0; d <= 4; ++d)
        for (int k = 0; k <= d; ++k) {
            CHECK(ab(d - k, k) == doctest::Approx(ba(d - k, k)).epsilon(1e-14));
            CHECK(l(d - k, k) == doctest::Approx(r(d - k, k)).epsilon(1e-12));
        }
}

TEST_CASE("rational jets are exact") {
    using Q = todkit::Rational;
    using QJet = todkit::Jet2<Q>;
    const QJet x = QJet::seed(0, Q(1, 3), 3), y = QJet::seed(1, Q(2), 3);
    const QJet f = (x * x * y) / (Q(1) + x);
    // d/dx of x^2 y/(1+x) = y (x^2 + 2x)/(1+x)^2 at x = 1/3, y = 2: 2 * (7/9)/(16/9) = 7/8
    CHECK(f(1, 0) == Q(7, 8));
    CHECK(f(0, 0) == Q(1, 6));
}

TEST_CASE("composite fields agree with differences") {
    const auto at = [](double u, double v) {
        const Jet x = Jet::seed(0, u, 4), y = Jet::seed(1, v, 4);
        return sqrt(x * x + y * y) * artanh(y / (1.0 + x * x + y * y)) + exp(x - y);
    };
    const oracle::Field f = [](double u, double v) {
        return std::hypot(u, v) * std::atanh(v / (1 + u * u + v * v)) + std::exp(u - v);
    };
    CHECK(jetcheck::against_values(f, at(0.8, 0.3), 0.8, 0.3, 1e-2) < 1e-8);
    CHECK(jetcheck::against_self(at, 0.8, 0.3, 1e-2) < 1e-7);
}
