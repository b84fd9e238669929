#include <doctest.h>

#include "todkit/classify.hpp"
#include "todkit/errors.hpp"
#include "todkit/tod.hpp"

using namespace todkit;

namespace {

bool has_certificate(const ClassificationReport& r, const std::string& branch, const std::string& text) {
    for (const auto& c : r.certificates)
        if (c.branch == branch && c.reason.find(text) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("one ALE family up to four nuts") {
    const ClassificationReport r = search_admissible(4, 10);
    REQUIRE(r.admissible.size() == 1);
    const Family& f = r.admissible[0];
    CHECK(f.n == 2);
    CHECK(f.weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    CHECK(f.levels == std::vector<long long>{2});
    CHECK(f.signs == std::vector<int>{1});
    CHECK(f.lens.p == 2);
    CHECK(f.lens.q == 1);
    CHECK(r.branches == static_cast<int>(r.certificates.size()) + 1);
    CHECK(!r.consulted_l_bound);
}

TEST_CASE("certificates") {
    const ClassificationReport r = search_admissible(4, 10);
    CHECK(has_certificate(r, "n=1 []", "W = 0"));
    CHECK(has_certificate(r, "n=3 [-,+]", "v_0 = -v_3"));
    CHECK(has_certificate(r, "n=3 [-,+]", "v_2 = (1,-1), v_3 = (0,-1)"));
    CHECK(has_certificate(r, "n=2 [+]", "v_0 = -v_2"));
    CHECK(has_certificate(r, "n=3 [+,+]", "no integer"));
    for (const auto& c : r.certificates) CHECK(!c.reason.empty());
}

TEST_CASE("asymptotically flat mode keeps the parallel branches") {
    const ClassificationReport r = search_admissible(4, 10, Asymptotics::af);
    CHECK(r.admissible.size() == 1);
    CHECK(r.informational.size() == 3);
    const ClassificationReport small = search_admissible(1, 10);
    CHECK(small.admissible.empty());
    CHECK(small.certificates.size() == 1);
    CHECK_THROWS_AS(search_admissible(0, 10), InvalidInput);
}

TEST_CASE("slope data and residuals on Eguchi-Hanson") {
    const SlopeData d = slope_data(to_exact(eh_rod_data(1.0)));
    CHECK(d.n == 2);
    CHECK(d.slopes == std::vector<Rational>{Rational(-1), Rational(0), Rational(1)});
    CHECK(d.levels == std::vector<long long>{2});
    CHECK(d.signs == std::vector<int>{1});
    const auto [a, b] = regularity_residuals(d, 1);
    CHECK(a == 0);
    CHECK(b == 0);
    RodData p = eh_rod_data(1.0);
    p.nuts[0].a = 0.375;
    p.nuts[1].a = 0.625;
    const SlopeData q = slope_data(to_exact(p));
    const auto [x, y] = regularity_residuals(q, 1);
    CHECK((x != 0 || y != 0));
}

TEST_CASE("interval arithmetic") {
    const Interval a = Interval::open(Rational(1), Rational(2));
    CHECK(integers_in(a).empty());
    CHECK(integers_in(Interval::open(Rational(1, 2), Rational(5, 2))) == std::vector<long long>{1, 2});
    CHECK(integers_in(Interval::point(Rational(3))) == std::vector<long long>{3});
    CHECK(intersect(a, Interval::open(Rational(3), std::nullopt)).empty());
    const Interval s = a + Interval::open(Rational(-1), Rational(0));
    CHECK(integers_in(s) == std::vector<long long>{1});
    const Interval d = Interval::open(Rational(2), Rational(4)) / Interval::open(Rational(1), Rational(2));
    CHECK(integers_in(d) == std::vector<long long>{2, 3});
    CHECK(!Interval::all().bounded());
    CHECK(Interval::open(Rational(1), Rational(1)).empty());
}

TEST_CASE("single nut degeneracy") {
    RodData one;
    one.c = -0.2;
    one.nuts = {{0.7, 1}};
    const DegeneracyReport d = verify_n1_degenerate(one);
    CHECK(d.degenerate);
    CHECK(d.samples > 100);
    CHECK(!verify_n1_degenerate(eh_rod_data(1.0)).degenerate);
}
