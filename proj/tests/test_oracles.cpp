#include <doctest.h>

#include <numbers>

#include "frozen.hpp"
#include "oracles.hpp"

TEST_SUITE("oracles") {
    TEST_CASE("oracles reproduce their frozen values") {
        CHECK(oracle::gaussian_mass(8) == doctest::Approx(frozen::kGaussianMassHalfWidth8).epsilon(1e-14));
        CHECK(oracle::sin_power_mass(2) == doctest::Approx(frozen::kSinSquaredMass).epsilon(1e-14));
        CHECK(oracle::ou_moment(2, 8) == doctest::Approx(frozen::kOUSecondMoment8).epsilon(1e-13));
        CHECK(oracle::ou_moment(4, 8) == doctest::Approx(frozen::kOUFourthMoment8).epsilon(1e-13));
        CHECK(oracle::normal_pdf(0) == doctest::Approx(frozen::kGaussPdf0).epsilon(1e-15));
        CHECK(oracle::normal_cdf(1) - oracle::normal_cdf(-1) ==
              doctest::Approx(frozen::kGaussMeasureMinus1To1).epsilon(1e-15));
        CHECK(2 * oracle::normal_pdf(1) == doctest::Approx(frozen::kGaussPerimeterMinus1To1).epsilon(1e-15));
        CHECK(oracle::normal_cdf(0.3) == doctest::Approx(frozen::kGaussCdf03).epsilon(1e-15));
        CHECK(oracle::hermite_he(2, 1.5) == doctest::Approx(frozen::kHe2At15).epsilon(1e-14));
        CHECK(oracle::hermite_he(3, 0.7) == doctest::Approx(frozen::kHe3At07).epsilon(1e-14));
        CHECK(oracle::jacobi(2, 0, 0, 0.3) == doctest::Approx(frozen::kLegendreP2At03).epsilon(1e-14));
        CHECK(oracle::jacobi(1, 1, 0, 0.4) == doctest::Approx(frozen::kJacobi10P1At04).epsilon(1e-14));
        CHECK(oracle::sphere_cap_volume(3, std::numbers::pi / 3) ==
              doctest::Approx(frozen::kSphere3CapVolumePi3).epsilon(1e-13));
        CHECK(oracle::sphere_cap_perimeter(3, std::numbers::pi / 3) ==
              doctest::Approx(frozen::kSphere3CapPerimeterPi3).epsilon(1e-13));
    }
}
