#include <omp.h>

#include <vector>

#include "smms/kernels.hpp"

namespace smms::kernels::parallel {

namespace {

using Index = std::ptrdiff_t;

// Interior sweep 1..n-2 in parallel; the two end nodes go through the serial
// reference on a three-node window so the boundary logic lives in one place.
template <class Interior, class Ends>
void sweep(std::size_t n, Interior&& interior, Ends&& ends) {
    const Index last = static_cast<Index>(n) - 1;
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (Index i = 1; i < last; ++i) interior(static_cast<std::size_t>(i));
    ends(0);
    if (n > 1) ends(n - 1);
}

template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (Index b = 0; b < static_cast<Index>(blocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0;
    for (double p : partial) total += p;
    return total;
}

} // namespace

void apply_stencil(const Stencil& L, std::span<const double> u, std::span<double> out) {
    const std::size_t n = u.size();
    sweep(
        n,
        [&](std::size_t i) { out[i] = L.lower[i] * u[i - 1] + L.diag[i] * u[i] + L.upper[i] * u[i + 1]; },
        [&](std::size_t i) {
            const double um = i > 0 ? u[i - 1] : (L.periodic ? u[n - 1] : 0.0);
            const double up = i + 1 < n ? u[i + 1] : (L.periodic ? u[0] : 0.0);
            out[i] = L.lower[i] * um + L.diag[i] * u[i] + L.upper[i] * up;
        });
}

void carre_du_champ(const Stencil& L, std::span<const double> u, std::span<const double> v,
                    std::span<double> out) {
    const std::size_t n = u.size();
    auto at = [&](std::size_t i, std::size_t im, std::size_t ip) {
        const double luv = L.lower[i] * u[im] * v[im] + L.diag[i] * u[i] * v[i] + L.upper[i] * u[ip] * v[ip];
        const double lu = L.lower[i] * u[im] + L.diag[i] * u[i] + L.upper[i] * u[ip];
        const double lv = L.lower[i] * v[im] + L.diag[i] * v[i] + L.upper[i] * v[ip];
        out[i] = 0.5 * (luv - u[i] * lv - v[i] * lu);
    };
    sweep(
        n, [&](std::size_t i) { at(i, i - 1, i + 1); },
        [&](std::size_t i) {
            const std::size_t im = i > 0 ? i - 1 : (L.periodic ? n - 1 : i);
            const std::size_t ip = i + 1 < n ? i + 1 : (L.periodic ? 0 : i);
            at(i, im, ip);
        });
}

void gradient(std::span<const double> u, double h, bool periodic, std::span<double> out) {
    const std::size_t n = u.size();
    const double inv = 0.5 / h;
    sweep(
        n, [&](std::size_t i) { out[i] = (u[i + 1] - u[i - 1]) * inv; },
        [&](std::size_t i) {
            if (periodic) {
                const std::size_t im = i > 0 ? i - 1 : n - 1;
                const std::size_t ip = i + 1 < n ? i + 1 : 0;
                out[i] = (u[ip] - u[im]) * inv;
            } else if (i == 0) {
                out[i] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv;
            } else {
                out[i] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv;
            }
        });
}

void second_difference(std::span<const double> u, double h, bool periodic, std::span<double> out) {
    const std::size_t n = u.size();
    const double ih2 = 1.0 / (h * h);
    sweep(
        n, [&](std::size_t i) { out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * ih2; },
        [&](std::size_t i) {
            if (periodic) {
                const std::size_t im = i > 0 ? i - 1 : n - 1;
                const std::size_t ip = i + 1 < n ? i + 1 : 0;
                out[i] = (u[ip] - 2.0 * u[i] + u[im]) * ih2;
            } else if (i == 0) {
                out[i] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) * ih2;
            } else {
                out[i] = (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) * ih2;
            }
        });
}

double weighted_sum(std::span<const double> w, std::span<const double> a) {
    return blocked_sum(a.size(), [&](std::size_t i) { return w[i] * a[i]; });
}

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
    return blocked_sum(a.size(), [&](std::size_t i) { return w[i] * a[i] * b[i]; });
}

} // namespace smms::kernels::parallel
