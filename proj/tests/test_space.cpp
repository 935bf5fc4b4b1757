#include <doctest.h>

#include <cmath>
#include <numbers>
#include <span>

#include "frozen.hpp"
#include "smms/errors.hpp"
#include "smms/field.hpp"
#include "smms/space.hpp"

using namespace smms;

namespace {

constexpr double kPi = std::numbers::pi;

double total(std::span<const double> w) {
    double s = 0;
    for (double v : w) s += v;
    return s;
}

} // namespace

TEST_SUITE("space") {
    TEST_CASE("uniform circle has equal masses") {
        const auto c = build_space(Circle{2 * kPi}, WeightSpec::zero(), 64, true);
        CHECK(c->total_mass() == doctest::Approx(1.0).epsilon(1e-15));
        for (double q : c->quad_weights()) CHECK(q == doctest::Approx(1.0 / 64).epsilon(1e-15));
        CHECK(c->periodic());
    }

    TEST_CASE("unnormalized truncated OU line carries the Gaussian mass") {
        const auto s = build_space(TruncatedLine{8}, WeightSpec::quadratic(), 2048, false);
        CHECK(std::abs(s->total_mass() - frozen::kGaussianMassHalfWidth8) < 1e-10);
        CHECK(std::abs(s->raw_mass() - std::sqrt(2 * kPi)) < 1e-10);
    }

    TEST_CASE("log-sin weight with m = 3 gives the sin^2 mass") {
        const auto s = build_space(Interval{0, kPi}, WeightSpec::log_sin(3), 4096, false);
        CHECK(std::abs(s->total_mass() - frozen::kSinSquaredMass) < 1e-6);
    }

    TEST_CASE("integrate reproduces constants and Gaussian moments") {
        const auto ou = build_space(TruncatedLine{8}, WeightSpec::quadratic(), 1024, true);
        CHECK(integrate(ScalarField::constant(ou, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(integrate(ScalarField::sample(ou, [](double x) { return x; }))) < 1e-10);
        CHECK(std::abs(integrate(ScalarField::sample(ou, [](double x) { return x * x; })) - frozen::kOUSecondMoment8) <
              1e-8);
    }

    TEST_CASE("midpoint refinement shrinks the quadrature error by about four") {
        auto err = [](std::size_t n) {
            const auto s = build_space(Interval{0, 1}, WeightSpec::linear(1.0), n, false);
            const double exact = (1.0 - std::exp(-1.0)) - std::exp(-1.0);  // int_0^1 x e^{-x} dx
            return std::abs(integrate(ScalarField::sample(s, [](double x) { return x; })) - exact);
        };
        const double e1 = err(64), e2 = err(128), e3 = err(256);
        CHECK(e1 / e2 >= 3.5);
        CHECK(e2 / e3 >= 3.5);
    }

    TEST_CASE("normalization is idempotent bit for bit") {
        const auto s = build_space(TruncatedLine{6}, WeightSpec::quadratic(2.0, 0.5), 300, false);
        const auto n1 = normalize(s);
        const auto n2 = normalize(n1);
        const auto n3 = normalize(build_space(TruncatedLine{6}, WeightSpec::quadratic(2.0, 0.5), 300, true));
        REQUIRE(n1->size() == n2->size());
        for (std::size_t i = 0; i < n1->size(); ++i) {
            CHECK(n1->quad_weights()[i] == n2->quad_weights()[i]);
            CHECK(n1->quad_weights()[i] == n3->quad_weights()[i]);
        }
        CHECK(total(n1->quad_weights()) == doctest::Approx(1.0).epsilon(1e-14));
    }

    TEST_CASE("weight derivatives agree with central differences") {
        for (const auto& w : {WeightSpec::quadratic(), WeightSpec::log_sin(4), WeightSpec::jacobi(1.0, 0.5),
                              WeightSpec::cosine(0.7, 2.0), WeightSpec::polynomial({0.1, -0.4, 0.3, 0.05})}) {
            double prev = 0;
            for (double h : {1e-2, 5e-3}) {
                double worst = 0, worst2 = 0;
                for (double x = 0.2; x < 0.8; x += 0.05) {
                    worst = std::max(worst, std::abs(w.d1(x) - (w(x + h) - w(x - h)) / (2 * h)));
                    worst2 = std::max(worst2, std::abs(w.d2(x) - (w.d1(x + h) - w.d1(x - h)) / (2 * h)));
                }
                CHECK(worst < 200 * h * h);
                CHECK(worst2 < 2000 * h * h);
                if (prev > 1e-12) CHECK(prev / worst >= 3.5);
                prev = worst;
            }
        }
    }

    TEST_CASE("construction preconditions") {
        CHECK_THROWS_AS(build_space(Circle{2 * kPi}, WeightSpec::zero(), 8, true), PreconditionError);
        CHECK_THROWS_AS(build_space(Interval{1, 0}, WeightSpec::zero(), 32, true), PreconditionError);
        CHECK_THROWS_AS(build_space(Interval{-0.5, 1}, WeightSpec::log_sin(3), 32, true), PreconditionError);
        CHECK_THROWS_AS(WeightSpec::from_registry("nope", {}), ParseError);
        CHECK_THROWS_AS(WeightSpec::from_registry("jacobi", {-1.5, 0}), PreconditionError);
    }

    TEST_CASE("unit ball volumes") {
        CHECK(unit_ball_volume(2) == doctest::Approx(kPi));
        CHECK(unit_ball_volume(3) == doctest::Approx(4 * kPi / 3));
        CHECK(unit_ball_volume(4) == doctest::Approx(kPi * kPi / 2));
    }
}
