#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dnscatter/errors.hpp"
#include "dnscatter/matcher.hpp"
#include "dnscatter/modes.hpp"

using namespace dnscatter;

TEST_CASE("eps_1 = 2/pi") {
    const BasisAngle a = estimate_basis_angle(1);
    CHECK(std::abs(a.eps - 2 / std::numbers::pi) < 1e-12);
    CHECK(a.one_minus_eps == doctest::Approx(1 - 2 / std::numbers::pi).epsilon(1e-12));
    CHECK(a.eta == doctest::Approx(std::sqrt(1 - 4 / (std::numbers::pi * std::numbers::pi))));
}

TEST_CASE("eps_N against the double-precision SVD where it resolves") {
    for (int N : {2, 3, 4, 6}) {
        const BasisAngle a = estimate_basis_angle(N);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(OverlapMatrix(N).matrix());
        CHECK(a.eps == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
        CHECK(a.eps_strictly_inside_unit_interval());
    }
}

TEST_CASE("eps_N increases towards 1 and stays strictly below it") {
    double prev_gap = 1.0;
    for (int N : {1, 2, 4, 8, 16, 32, 64, 128, 200}) {
        const BasisAngle a = estimate_basis_angle(N);
        CHECK(a.eps_strictly_inside_unit_interval());
        CHECK(a.eps <= 1.0);
        CHECK(a.one_minus_eps < prev_gap);
        CHECK(a.eta > 0.0);
        CHECK(a.precision_digits > 0);
        prev_gap = a.one_minus_eps;
    }
    CHECK_THROWS_AS(estimate_basis_angle(0), InvalidArgument);
}
