#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "frozen.hpp"
#include "oracles.hpp"
#include "smms/errors.hpp"
#include "smms/isoperimetry.hpp"

using namespace smms;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = IntervalUnion::kInf;

IntervalUnion random_union(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    std::uniform_int_distribution<int> K(1, 4);
    std::vector<double> ends;
    const int k = K(gen);
    for (int j = 0; j < 2 * k; ++j) ends.push_back(U(gen));
    std::sort(ends.begin(), ends.end());
    std::vector<std::pair<double, double>> parts;
    for (int j = 0; j < k; ++j) parts.emplace_back(ends[2 * j], ends[2 * j + 1]);
    if (gen() % 3 == 0) parts.front().first = -kInf;
    return IntervalUnion(parts);
}

} // namespace

TEST_SUITE("isoperimetry") {
    TEST_CASE("Gaussian profile values") {
        CHECK(gauss_profile(0.5) == doctest::Approx(frozen::kGaussPdf0).epsilon(1e-14));
        CHECK(gauss_profile(0.0) == 0.0);
        CHECK(gauss_profile(1.0) == 0.0);
        CHECK(gauss_cdf(gauss_cdf_inv(0.7)) == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(gauss_cdf(0.3) == doctest::Approx(frozen::kGaussCdf03).epsilon(1e-14));
        CHECK(gauss_pdf(0.3) == doctest::Approx(frozen::kGaussPdf03).epsilon(1e-14));
        CHECK_THROWS_AS(gauss_cdf_inv(1.5), PreconditionError);
        for (double v : {0.01, 0.2, 0.5, 0.9}) {
            CHECK(gauss_profile(v) == doctest::Approx(oracle::normal_pdf(gauss_cdf_inv(v))).epsilon(1e-12));
            CHECK(gauss_profile(v) == doctest::Approx(gauss_profile(1 - v)).epsilon(1e-10));
        }
    }

    TEST_CASE("Euclidean and sphere profiles") {
        CHECK(euclidean_profile(2, kPi) == doctest::Approx(2 * kPi));
        CHECK(euclidean_profile(3, 4 * kPi / 3) == doctest::Approx(4 * kPi));
        CHECK(sphere_cap_profile(2, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(sphere_cap_profile(3, oracle::sphere_cap_volume(3, kPi / 3)) ==
              doctest::Approx(frozen::kSphere3CapPerimeterPi3).epsilon(1e-9));
        for (int n : {2, 3, 5}) {
            for (double th : {0.3, 1.0, 2.0}) {
                const double v = oracle::sphere_cap_volume(n, th);
                CHECK(sphere_cap_angle(n, v) == doctest::Approx(th).epsilon(1e-9));
                CHECK(sphere_cap_profile(n, v) == doctest::Approx(oracle::sphere_cap_perimeter(n, th)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("Gaussian measure and perimeter of unions") {
        const IntervalUnion I({{-1, 1}});
        CHECK(gaussian_measure(I) == doctest::Approx(frozen::kGaussMeasureMinus1To1).epsilon(1e-14));
        CHECK(gaussian_perimeter(I) == doctest::Approx(frozen::kGaussPerimeterMinus1To1).epsilon(1e-14));
        CHECK(gaussian_perimeter(IntervalUnion({{-kInf, kInf}})) == 0.0);
        CHECK(gaussian_perimeter(IntervalUnion::half_line(0.3)) == doctest::Approx(frozen::kGaussPdf03));
        const IntervalUnion merged({{0, 2}, {1, 3}, {-1, -0.5}});
        CHECK(merged.intervals().size() == 2);
        CHECK(merged.length() == doctest::Approx(3.5));
        const auto sum = IntervalUnion({{0, 1}}).minkowski_sum(IntervalUnion({{0, 1}, {3, 4}}));
        CHECK(sum.length() == doctest::Approx(4.0));
    }

    TEST_CASE("half-lines are extremal, bounded sets are strict") {
        for (double a : {-2.0, 0.0, 0.3, 1.7}) {
            const auto r = gaussian_iso_check(IntervalUnion::half_line(a));
            CHECK(r.passed());
            CHECK(std::abs(r.worst_margin()) < 1e-10);
        }
        const auto r = gaussian_iso_check(IntervalUnion({{-1, 1}}));
        CHECK(r.passed());
        CHECK(r.worst_margin() > 0.1);
    }

    TEST_CASE("random unions satisfy the Gaussian inequality") {
        std::mt19937_64 gen(7);
        for (int j = 0; j < 200; ++j) CHECK(gaussian_iso_check(random_union(gen)).passed());
    }

    TEST_CASE("half-lines minimise the perimeter at fixed measure") {
        std::mt19937_64 gen(11);
        for (double target : {0.2, 0.5, 0.8}) {
            const double best = gauss_profile(target);
            double lowest = kInf;
            for (int j = 0; j < 200; ++j) {
                // Random interval [a, b] whose upper end is tuned by bisection so that mu = target.
                const double a = std::uniform_real_distribution<double>(-6.0, gauss_cdf_inv(1 - target))(gen);
                double lo = a, hi = 12;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (gaussian_measure(IntervalUnion({{a, mid}})) < target ? lo : hi) = mid;
                }
                const IntervalUnion A({{a, 0.5 * (lo + hi)}});
                CHECK(gaussian_measure(A) == doctest::Approx(target).epsilon(1e-9));
                const double per = gaussian_perimeter(A);
                CHECK(per >= best - 1e-9);
                lowest = std::min(lowest, per);
            }
            CHECK(lowest <= best + 1e-4);
        }
    }

    TEST_CASE("Minkowski content on a weighted line") {
        const auto s = build_space(TruncatedLine{8}, WeightSpec::quadratic(), 512, true);
        const auto H = IntervalUnion::half_line(0.3);
        CHECK(minkowski_content_1d(*s, H, MinkowskiMode::Analytic) == doctest::Approx(frozen::kGaussPdf03).epsilon(1e-9));
        CHECK(minkowski_content_1d(*s, H, MinkowskiMode::EpsilonSweep) ==
              doctest::Approx(frozen::kGaussPdf03).epsilon(1e-6));
        CHECK(minkowski_content_1d(*s, IntervalUnion({{-8, 8}}), MinkowskiMode::Analytic) == 0.0);
        const IntervalUnion I({{-1, 1}});
        CHECK(minkowski_content_1d(*s, I, MinkowskiMode::Analytic) ==
              doctest::Approx(frozen::kGaussPerimeterMinus1To1).epsilon(1e-9));
        CHECK(measure(*s, I) == doctest::Approx(frozen::kGaussMeasureMinus1To1).epsilon(1e-9));
        CHECK(cd_iso_check(s, 1.0, I).passed());
        CHECK(cd_iso_check(s, 1.0, H).passed());
    }

    TEST_CASE("Brunn-Minkowski") {
        const auto boxes = brunn_minkowski_check(Box{{1, 2}}, Box{{2, 4}});
        CHECK(boxes.passed());
        CHECK(std::abs(boxes.worst_margin()) < 1e-12);
        const auto strict = brunn_minkowski_check(Box{{1, 4}}, Box{{4, 1}});
        CHECK(strict.passed());
        CHECK(strict.worst_margin() > 0.1);
        const auto unions = brunn_minkowski_check(IntervalUnion({{0, 1}, {2, 3}}), IntervalUnion({{0, 0.5}}));
        CHECK(unions.passed());
        CHECK_THROWS_AS(brunn_minkowski_check(Box{{1, 2}}, Box{{1}}), PreconditionError);
    }

    TEST_CASE("sampled profiles are symmetric and concave") {
        for (const auto& model : {ModelSpace::gauss(1), ModelSpace::sphere(3)}) {
            const auto c = sample_profile(model, 199);
            CHECK(c.v.size() == 199);
            for (std::size_t i = 0; i < c.v.size(); ++i) {
                CHECK(c.I[i] == doctest::Approx(c.I[c.v.size() - 1 - i]).epsilon(1e-9));
            }
            for (std::size_t i = 1; i + 1 < c.v.size(); ++i) CHECK(c.I[i - 1] + c.I[i + 1] <= 2 * c.I[i] + 1e-12);
        }
    }
}
