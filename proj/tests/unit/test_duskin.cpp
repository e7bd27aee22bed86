#include "doctest.h"
#include "oracles.hpp"
#include "xmc/duskin.hpp"
#include "xmc/errors.hpp"
#include "xmc/json_io.hpp"

using namespace xmc;

namespace {
CrossedModule xm(const std::string& s) { return xmod_from_json(s, ""); }
}

TEST_CASE("nerve counts")
{
    auto t = ordinary_nerve(make_trivial(), 3);
    CHECK(t.counts == std::vector<int>{1, 1, 1, 1});
    CHECK(ordinary_nerve(named_group("C2"), 2).counts[2] == 4);
    DuskinNerve d = duskin_nerve(xm("C2->1"), 3);
    CHECK(d.set.counts == std::vector<int>{1, 1, 2, 8});
    CHECK(validate_simplicial(d.set).empty());
    CHECK(duskin_nerve(xm("1->S3"), 3).set.counts == std::vector<int>{1, 6, 36, 216});
}

TEST_CASE("homology")
{
    Homology pt = homology(ordinary_nerve(make_trivial(), 3), 2);
    CHECK(pt.groups == std::vector<std::vector<i64>>{{0}, {}, {}});
    Homology c3 = homology(ordinary_nerve(make_cyclic(3), 3), 1);
    CHECK(c3.groups[1] == std::vector<i64>{3});
    auto d = duskin_nerve(xm("C2->1"), 4).set;
    Homology k = homology(d, 2);
    CHECK(k.groups == std::vector<std::vector<i64>>{{0}, {}, {2}});
    CHECK(oracle::full_homology(d, 2) == k.groups);
    // id:C2 is equivalent to a point
    Homology idc2 = homology(monoidal_diag_nerve(xm("id:C2"), 3).set, 2);
    CHECK(idc2.groups == std::vector<std::vector<i64>>{{0}, {}, {}});
}

TEST_CASE("cocycle maps and homotopies")
{
    FiniteGroup c2 = named_group("C2");
    CrossedModule x = xm("id:C2");
    DuskinNerve d = duskin_nerve(x, 3);
    auto src = ordinary_nerve(c2, 3);
    auto z = enumerate_Z1(c2, x);
    for (const auto& a : z) {
        for (const auto& b : z) {
            auto w = are_cohomologous(c2, x, a, b);
            REQUIRE(w.has_value());
            if (w->gamma != x.G.identity) continue;
            CoboundaryHomotopy h = coboundary_to_homotopy(c2, a, b, *w, d, src);
            CHECK(h.issues.empty());
        }
    }
    // a wrong witness is rejected
    CrossedModule k = xm("C2->1");
    DuskinNerve dk = duskin_nerve(k, 3);
    Cocycle1 t{{0, 0}, {0, 0, 0, 0}}, n{{0, 0}, {0, 0, 0, 1}};
    CHECK_THROWS_AS(coboundary_to_homotopy(c2, t, n, Coboundary1Witness{0, {0, 1}}, dk, src), ViolationError);
}

TEST_CASE("appendix identities, small")
{
    CHECK(verify_appendix_retraction(xm("1->C2"), 3, 2).passed());
    CHECK(verify_appendix_retraction(xm("C2->1"), 2, 2).passed());
}
