#include "doctest.h"
#include "xmc/errors.hpp"
#include "xmc/json_io.hpp"

using namespace xmc;

TEST_CASE("theta on the Z/2 -> Z/4 -> Z/2 family")
{
    FiniteGroup c2 = named_group("C2");
    CentralXModExtension e = z2_z4_z2_extension(false);
    CHECK(validate_extension(e).empty());
    CHECK(theta(e, c2, trivial_cocycle(c2, e.x1)).zero());
    // over Z/2 the lift of the nonzero class is itself a cocycle
    for (const auto& c : compute_H1(c2, e.x1).classes) CHECK(theta(e, c2, c).zero());
    // over Z/2 x Z/2 the Bockstein is nonzero on exactly half of H^2
    FiniteGroup v4 = named_group("C2xC2");
    int nonzero = 0;
    for (const auto& c : compute_H1(v4, e.x1).classes) nonzero += !theta(e, v4, c).zero();
    CHECK(nonzero == 4);
}

TEST_CASE("induced module under inversion is trivial on the kernel")
{
    FiniteGroup c2 = named_group("C2");
    CentralXModExtension e = z2_z4_z2_extension(true);
    for (const auto& c : compute_H1(c2, e.x1).classes) CHECK(induced_module(e, c2, c).module.trivial_action());
}

TEST_CASE("exactness and a corrupted extension")
{
    for (std::string g : {"C2", "C4"}) CHECK(verify_exactness(z2_z4_z2_extension(true), named_group(g)).exact());
    CentralXModExtension e = z2_z4_z2_extension(false);
    CHECK_THROWS_AS(make_extension(e.x0, e.x1, {0, 1, 1, 1}), InputError);
}

TEST_CASE("matrix kernels")
{
    FiniteGroup c2 = named_group("C2");
    Mat z = Mat::Identity(2, 2);
    z(1, 1) = -1;
    std::vector<Mat> rep = {Mat::Identity(2, 2), z};
    MatrixObstruction r = matrix_kernel_obstruction(c2, rep);
    CHECK(r.coordinates == std::vector<i64>{0});
    FiniteGroup g = make_product(make_cyclic(3), make_cyclic(3));
    auto cs = clock_shift_kernel(3);
    MatrixObstruction o = matrix_kernel_obstruction(g, cs);
    CHECK(o.witness.has_value());
    cs[4] = cs[4] * (Mat::Identity(3, 3) + 1e-2 * Mat::Ones(3, 3));
    CHECK_THROWS_AS(matrix_kernel_obstruction(g, cs, 1e-6), InputError);
}
