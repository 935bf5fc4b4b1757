#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "smms/kernels.hpp"
#include "smms/space.hpp"

namespace {

struct Setup {
    smms::SpacePtr space;
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> out;

    explicit Setup(std::size_t n)
        : space(smms::build_space(smms::TruncatedLine{8.0}, smms::WeightSpec::quadratic(), n, true)), u(n), v(n),
          out(n) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = space->nodes()[i];
            u[i] = std::sin(x) + 0.1 * x * x;
            v[i] = std::cos(2.0 * x);
        }
    }
};

template <bool Parallel>
void BM_ApplyStencil(benchmark::State& state) {
    Setup s(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        if constexpr (Parallel) {
            smms::kernels::parallel::apply_stencil(s.space->laplacian(), s.u, s.out);
        } else {
            smms::kernels::serial::apply_stencil(s.space->laplacian(), s.u, s.out);
        }
        benchmark::DoNotOptimize(s.out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_CarreDuChamp(benchmark::State& state) {
    Setup s(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        if constexpr (Parallel) {
            smms::kernels::parallel::carre_du_champ(s.space->laplacian(), s.u, s.v, s.out);
        } else {
            smms::kernels::serial::carre_du_champ(s.space->laplacian(), s.u, s.v, s.out);
        }
        benchmark::DoNotOptimize(s.out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_WeightedDot(benchmark::State& state) {
    Setup s(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        double r = Parallel ? smms::kernels::parallel::weighted_dot(s.space->quad_weights(), s.u, s.v)
                            : smms::kernels::serial::weighted_dot(s.space->quad_weights(), s.u, s.v);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_ApplyStencil<false>)->Name("apply_stencil/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_ApplyStencil<true>)->Name("apply_stencil/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_CarreDuChamp<false>)->Name("carre_du_champ/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_CarreDuChamp<true>)->Name("carre_du_champ/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_WeightedDot<false>)->Name("weighted_dot/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_WeightedDot<true>)->Name("weighted_dot/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);

BENCHMARK_MAIN();
