#include "doctest.h"
#include "oracles.hpp"
#include "xmc/cohomology.hpp"
#include "xmc/errors.hpp"

using namespace xmc;

TEST_CASE("groups")
{
    CHECK(make_cyclic(1).order == 1);
    FiniteGroup g = make_product(make_cyclic(2), make_cyclic(3));
    CHECK(g.order == 6);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) CHECK(g.m(a, b) == g.m(b, a));
    CHECK(validate_group(named_group("S3")).empty());
    CHECK(validate_group(named_group("Q8")).empty());
    FiniteGroup bad = make_cyclic(3);
    bad.inv[1] = 1;
    Report r = validate_group(bad);
    REQUIRE_FALSE(r.empty());
    CHECK(r.front().witness == std::vector<int>{1, 1});
    CHECK_THROWS_AS(named_group("nonsense"), InputError);
}

TEST_CASE("bar differential")
{
    FiniteGroup c2 = make_cyclic(2);
    Coefficients z4 = Coefficients::finite({4});
    Cochain zero = zero_cochain(c2, z4, 1);
    CHECK(bar_differential(c2, z4, zero) == zero_cochain(c2, z4, 2));
    // d o d = 0 on every 1-cochain
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            Cochain c = zero_cochain(c2, z4, 1);
            c.values = {a, b};
            CHECK(bar_differential(c2, z4, bar_differential(c2, z4, c)) == zero_cochain(c2, z4, 3));
        }
    }
    // c(g) = g over Z/3: dc(g, h) = g + h - (g + h mod 3) = 0 mod 3, against the oracle
    FiniteGroup c3 = make_cyclic(3);
    Coefficients z3 = Coefficients::finite({3});
    Cochain c = zero_cochain(c3, z3, 1);
    c.values = {0, 1, 2};
    Cochain d = bar_differential(c3, z3, c);
    auto ref = oracle::differential(c3, 3, 1, {0, 1, 2});
    for (size_t t = 0; t < ref.size(); ++t) {
        CHECK(d.values[t] == ref[t]);
        CHECK(ref[t] == 0);
    }
}

TEST_CASE("cohomology against enumeration")
{
    for (int n = 1; n <= 3; ++n) CHECK(cohomology(make_trivial(), Coefficients::finite({4}), n).factors().empty());
    CHECK(cohomology(make_cyclic(2), Coefficients::finite({2}), 2).factors() == std::vector<i64>{2});
    struct Case {
        std::string g;
        int N, n;
    };
    for (const Case& c : {Case{"C2", 2, 1}, Case{"C2", 4, 2}, Case{"C3", 3, 2}, Case{"C2xC2", 2, 2}, Case{"C4", 2, 2},
                          Case{"S3", 2, 2}, Case{"S3", 3, 2}, Case{"C2", 2, 3}, Case{"C2xC2", 2, 3}}) {
        FiniteGroup g = named_group(c.g);
        auto lib = cohomology(g, Coefficients::finite({c.N}), c.n).factors();
        auto ref = oracle::brute_cohomology(g, c.N, c.n, true).factors;
        CHECK_MESSAGE(lib == ref, c.g << " Z/" << c.N << " degree " << c.n);
    }
}

TEST_CASE("coboundaries and classification")
{
    FiniteGroup c2 = make_cyclic(2);
    Coefficients z2 = Coefficients::finite({2});
    auto w = is_coboundary(c2, z2, zero_cochain(c2, z2, 2));
    REQUIRE(w.has_value());
    CHECK(*w == zero_cochain(c2, z2, 1));
    CohomologyGroup h = cohomology(c2, z2, 2);
    REQUIRE(h.representatives().size() == 1);
    CHECK_FALSE(is_coboundary(c2, z2, h.representatives()[0]).has_value());
    CHECK(h.classify(h.representatives()[0]) == std::vector<i64>{1});
    CohomologyGroup h3 = cohomology(named_group("C2xC2"), Coefficients::circle(), 3);
    CHECK(h3.factors() == std::vector<i64>{2, 2, 2});
    for (size_t k = 0; k < h3.representatives().size(); ++k) {
        std::vector<i64> e(h3.factors().size(), 0);
        e[k] = 1;
        CHECK(h3.classify(h3.representatives()[k]) == e);
    }
}
