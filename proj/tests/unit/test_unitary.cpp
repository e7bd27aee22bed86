#include <cmath>

#include "doctest.h"
#include "xmc/errors.hpp"
#include "xmc/unitary.hpp"

using namespace xmc;

namespace {
UnitaryPath exp_path(const Mat& h, int K)
{
    UnitaryPath p;
    for (int k = 0; k <= K; ++k) {
        double t = static_cast<double>(k) / K;
        p.ts.push_back(t);
        p.mats.push_back(exp_i(2 * M_PI * t * h));
    }
    return p;
}
Mat projection()
{
    Mat p = Mat::Zero(2, 2);
    p(0, 0) = 1;
    return p;
}
}  // namespace

TEST_CASE("path determinant")
{
    CHECK(dlhs_path(exp_path(0.3 * Mat::Identity(3, 3), 8)).value == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(dlhs_path(exp_path(projection(), 8)).value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dlhs_path(exp_path(projection(), 16), 64).value == doctest::Approx(0.5).epsilon(1e-8));
    // homomorphism on products
    std::mt19937_64 rng(5);
    Mat a = random_self_adjoint(3, 1.3, rng), b = random_self_adjoint(3, 0.7, rng);
    auto pa = exp_path(a, 40), pb = exp_path(b, 40);
    double sum = dlhs_path(pa).value + dlhs_path(pb).value;
    CHECK(std::abs(dlhs_path(pointwise_product(pa, pb)).value - sum) < 1e-8);
    UnitaryPath coarse = exp_path(0.45 * Mat::Identity(2, 2), 1);
    CHECK_THROWS_AS(validate_path(coarse), InputError);
}

TEST_CASE("Delta")
{
    CHECK(dlhs_delta(Mat::Identity(3, 3)).value == doctest::Approx(0).epsilon(1e-12));
    CHECK(circle_distance(dlhs_delta(std::polar(1.0, 2 * M_PI / 3) * Mat::Identity(3, 3)).value, 0, 3) < 1e-10);
    Mat u = Mat::Identity(3, 3);
    u(0, 0) = std::polar(1.0, 1.0);
    CHECK(circle_distance(dlhs_delta(u).value, 1.0 / (6 * M_PI), 3) < 1e-10);
}

TEST_CASE("SU membership and exponential length")
{
    SuMembership id = su_tau_member(Mat::Identity(2, 2));
    CHECK(id.member);
    CHECK_FALSE(su_tau_member(std::polar(1.0, 0.4) * Mat::Identity(3, 3)).member);
    std::mt19937_64 rng(9);
    SuMembership s = su_tau_member(random_special_unitary(3, rng));
    REQUIRE(s.member);
    REQUIRE(s.certificate.has_value());
    CHECK(s.certificate->residual < 1e-9);
    ExpLength minus = el_tau(-Mat::Identity(2, 2));
    CHECK(minus.value == doctest::Approx(M_PI));
    CHECK_FALSE(minus.exact);
    Mat d = Mat::Identity(2, 2);
    d(0, 0) = std::polar(1.0, 0.7);
    d(1, 1) = std::polar(1.0, -0.7);
    CHECK(el_tau(d).value == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(check_exp_inequalities(3, 200, 1).violations == 0);
}

TEST_CASE("decomposition")
{
    PathDecomposition c = decompose_path(exp_path(Mat::Zero(2, 2), 4));
    for (double h : c.h) CHECK(std::abs(h) < 1e-12);
    PathDecomposition s = decompose_path(exp_path(Mat::Identity(3, 3), 12));
    for (size_t k = 0; k < s.ts.size(); ++k) {
        CHECK(s.h[k] == doctest::Approx(s.ts[k]).epsilon(1e-12));
        CHECK(op_norm(s.g[k] - Mat::Identity(3, 3)) < 1e-10);
    }
    PathDecomposition p = decompose_path(exp_path(projection(), 8));
    for (size_t k = 0; k < p.ts.size(); ++k) {
        double t = p.ts[k];
        CHECK(p.h[k] == doctest::Approx(t / 2).epsilon(1e-12));
        Mat expect = exp_i(2 * M_PI * t * projection()) * std::polar(1.0, -M_PI * t);
        CHECK(op_norm(p.g[k] - expect) < 1e-10);
        CHECK(std::abs(p.g[k].determinant() - 1.0) < 1e-10);
    }
}
