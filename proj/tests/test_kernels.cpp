#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>
#include <vector>

#include "smms/kernels.hpp"

using namespace smms;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = -1, double hi = 1) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> U(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = U(gen);
    return v;
}

Stencil random_stencil(std::size_t n, bool periodic) {
    Stencil L;
    L.lower = random_vector(n, 1, 0.5, 2);
    L.upper = random_vector(n, 2, 0.5, 2);
    L.diag = random_vector(n, 3, -4, -1);
    L.periodic = periodic;
    if (!periodic) L.lower[0] = L.upper[n - 1] = 0;
    return L;
}

} // namespace

TEST_SUITE("kernels") {
    TEST_CASE("parallel elementwise kernels match the serial reference bit for bit") {
        for (std::size_t n : {std::size_t{100}, std::size_t{10000}, std::size_t{65537}}) {
            for (bool periodic : {false, true}) {
                const Stencil L = random_stencil(n, periodic);
                const auto u = random_vector(n, 4), v = random_vector(n, 5);
                std::vector<double> a(n), b(n);
                kernels::serial::apply_stencil(L, u, a);
                kernels::parallel::apply_stencil(L, u, b);
                CHECK(a == b);
                kernels::serial::carre_du_champ(L, u, v, a);
                kernels::parallel::carre_du_champ(L, u, v, b);
                CHECK(a == b);
                kernels::serial::gradient(u, 0.01, periodic, a);
                kernels::parallel::gradient(u, 0.01, periodic, b);
                CHECK(a == b);
                kernels::serial::second_difference(u, 0.01, periodic, a);
                kernels::parallel::second_difference(u, 0.01, periodic, b);
                CHECK(a == b);
            }
        }
    }

    TEST_CASE("reductions do not depend on the thread count") {
        const std::size_t n = 100003;
        const auto w = random_vector(n, 6, 0, 1), a = random_vector(n, 7), b = random_vector(n, 8);
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
        const double s1 = kernels::parallel::weighted_sum(w, a);
        const double d1 = kernels::parallel::weighted_dot(w, a, b);
        omp_set_num_threads(4);
        const double s4 = kernels::parallel::weighted_sum(w, a);
        const double d4 = kernels::parallel::weighted_dot(w, a, b);
        omp_set_num_threads(saved);
        CHECK(s1 == s4);
        CHECK(d1 == d4);
        const double ref = kernels::serial::weighted_dot(w, a, b);
        CHECK(std::abs(ref - d1) <= 1e-12 * n);
        CHECK(kernels::serial::weighted_sum(w, a) == doctest::Approx(s1).epsilon(1e-12));
    }
}
