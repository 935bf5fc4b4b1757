#include <doctest.h>

#include <cmath>
#include <numbers>

#include "smms/fields.hpp"
#include "smms/wasserstein.hpp"

using namespace smms;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField bump(const SpacePtr& s, double c, double w) {
    return ScalarField::sample(s, [=](double x) { return std::exp(-(x - c) * (x - c) / (2 * w * w)); });
}

// Bump of width w around c on a circle of period L, summed over images.
ScalarField periodic_bump(const SpacePtr& s, double c, double w) {
    const double L = s->length();
    return ScalarField::sample(s, [=](double x) {
        double v = 0;
        for (int j = -2; j <= 2; ++j) v += std::exp(-(x - c - j * L) * (x - c - j * L) / (2 * w * w));
        return v;
    });
}

FlowConfig flow(double t_final, std::vector<double> times = {}) {
    FlowConfig c;
    c.t_final = t_final;
    c.sample_times = std::move(times);
    return c;
}

} // namespace

TEST_SUITE("wasserstein") {
    TEST_CASE("identical densities are at distance zero") {
        const auto s = build_space(TruncatedLine{8}, WeightSpec::quadratic(), 256, true);
        const auto f = random_bandlimited(s, 2);
        CHECK(wasserstein2_1d(f, f) < 1e-12);
        const auto c = build_space(Circle{2 * kPi}, WeightSpec::zero(), 256, true);
        const auto g = random_bandlimited(c, 2);
        CHECK(wasserstein2_1d(g, g) < 1e-6);
    }

    TEST_CASE("narrow bumps approach the translation distance") {
        const auto s = build_space(Interval{-2, 2}, WeightSpec::zero(), 2000, true);
        double prev = 1;
        for (double w : {0.1, 0.03, 0.01}) {
            const double d = std::abs(wasserstein2_1d(bump(s, 0, w), bump(s, 1, w)) - 1.0);
            CHECK(d <= prev + 1e-12);
            prev = d;
        }
        CHECK(prev < 0.01);
    }

    TEST_CASE("uniform on [0, 1] against uniform on [0, 2]") {
        const auto s = build_space(Interval{0, 2}, WeightSpec::zero(), 400, true);
        const auto u1 = ScalarField::sample(s, [](double x) { return x < 1 ? 2.0 : 0.0; });
        const auto u2 = ScalarField::constant(s, 1.0);
        CHECK(std::pow(wasserstein2_1d(u1, u2), 2) == doctest::Approx(1.0 / 3).epsilon(1e-3));
    }

    TEST_CASE("shifted Gaussians on the OU space") {
        const auto s = build_space(TruncatedLine{8}, WeightSpec::quadratic(), 512, true);
        const auto a = ScalarField::sample(s, [](double x) { return std::exp(x - 0.5); });
        const auto b = ScalarField::sample(s, [](double x) { return std::exp(-x - 0.5); });
        CHECK(wasserstein2_1d(a, b) == doctest::Approx(2.0).epsilon(1e-3));
        const auto rep = wasserstein_contraction_check(s, a, b, 1.0, flow(0.5, {0.2, 0.5}));
        CHECK(rep.passed());
        for (const auto& smp : rep.samples()) CHECK(smp.lhs / 2.0 <= std::exp(-smp.t) * 1.01);
        CHECK(wasserstein_contraction_check(s, a, a, 1.0, flow(0.2)).passed());
    }

    TEST_CASE("circle distance uses the shorter arc across the cut") {
        const auto c = build_space(Circle{2 * kPi}, WeightSpec::zero(), 2048, true);
        const double w = 0.02;
        // Centres 0.2 and 2 pi - 0.2 are 0.4 apart through 0, not 2 pi - 0.4.
        CHECK(wasserstein2_1d(periodic_bump(c, 0.2, w), periodic_bump(c, 2 * kPi - 0.2, w)) ==
              doctest::Approx(0.4).epsilon(0.01));
        CHECK(wasserstein2_1d(periodic_bump(c, 1.0, w), periodic_bump(c, 2.5, w)) == doctest::Approx(1.5).epsilon(0.01));
        // Antipodal bumps: both arcs have length pi.
        CHECK(wasserstein2_1d(periodic_bump(c, 1.0, w), periodic_bump(c, 1.0 + kPi, w)) ==
              doctest::Approx(kPi).epsilon(0.01));
    }

    TEST_CASE("W2 is symmetric and nonincreasing along the flat circle flow") {
        const auto c = build_space(Circle{2 * kPi}, WeightSpec::zero(), 256, true);
        const auto f = ScalarField::sample(c, [](double x) { return 1 + 0.9 * std::cos(x); });
        const auto g = ScalarField::sample(c, [](double x) { return 1 + 0.9 * std::cos(x - 3); });
        CHECK(wasserstein2_1d(f, g) == doctest::Approx(wasserstein2_1d(g, f)).epsilon(1e-9));
        const auto rep = wasserstein_contraction_check(c, f, g, 0.0, flow(0.5));
        CHECK(rep.passed());
        double prev = wasserstein2_1d(f, g);
        for (const auto& smp : rep.samples()) {
            CHECK(smp.lhs <= prev + 1e-9);
            prev = smp.lhs;
        }
    }

    TEST_CASE("negative or massless densities are rejected") {
        const auto s = build_space(Interval{0, 1}, WeightSpec::zero(), 64, true);
        CHECK_THROWS_AS(wasserstein2_1d(ScalarField::constant(s, -1), ScalarField::constant(s, 1)), PreconditionError);
        CHECK_THROWS_AS(wasserstein2_1d(ScalarField::constant(s, 0), ScalarField::constant(s, 1)), PreconditionError);
    }
}
