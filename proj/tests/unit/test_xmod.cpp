#include "doctest.h"
#include "xmc/json_io.hpp"

using namespace xmc;

namespace {
CrossedModule xm(const std::string& s) { return xmod_from_json(s, ""); }
}

TEST_CASE("crossed module axioms")
{
    for (std::string g : {"C2", "S3", "Q8"}) CHECK(validate_xmod(xm("1->" + g)).empty());
    CHECK(validate_xmod(xm("id:C2")).empty());
    Report r = validate_xmod(xm("S3->1"));
    REQUIRE_FALSE(r.empty());
    CHECK(r.front().what.find("Peiffer") != std::string::npos);
}

TEST_CASE("cocycles and H^1")
{
    FiniteGroup c2 = named_group("C2");
    CHECK(enumerate_Z1(c2, xm("C2->1")).size() == 2);
    // (1 -> G): cocycles are homomorphisms
    CHECK(enumerate_Z1(c2, xm("1->S3")).size() == 4);
    CHECK(compute_H1(c2, xm("1->S3")).classes.size() == 2);
    CHECK(compute_H1(c2, xm("C2->1")).classes.size() == 2);
    H1PointedSet id = compute_H1(c2, xm("id:C2"));
    CHECK(id.classes.size() == 1);
    CHECK(id.basepoint == 0);
    auto all = enumerate_Z1(c2, xm("id:C2"));
    for (const auto& a : all)
        for (const auto& b : all) CHECK(are_cohomologous(c2, xm("id:C2"), a, b).has_value());
    Cocycle1 t{{0, 0}, {0, 0, 0, 0}}, n{{0, 0}, {0, 0, 0, 1}};
    auto self = are_cohomologous(c2, xm("C2->1"), n, n);
    REQUIRE(self.has_value());
    CHECK_FALSE(are_cohomologous(c2, xm("C2->1"), t, n).has_value());
}

TEST_CASE("abelian shift")
{
    AbelianShift s = abelian_shift(named_group("C3"), xm("C3->1"));
    CHECK(s.bijective);
    CHECK(s.h1.classes.size() == 3);
    CHECK(s.h2.factors() == std::vector<i64>{3});
}
