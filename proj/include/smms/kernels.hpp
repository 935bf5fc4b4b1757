#pragma once

#include <cstddef>
#include <span>

#include "smms/stencil.hpp"

// Grid kernels in two flavours: `serial` is the plain reference loop kept for
// testing, `parallel` is the OpenMP version the library routes through.
// Elementwise kernels produce bit-identical output in both flavours.
// Reductions in `parallel` sum fixed-size blocks and combine the partial sums
// in block order, so the result does not depend on the thread count.
namespace smms::kernels {

// Below this node count the parallel kernels run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 4096;
inline constexpr std::size_t kReductionBlock = 1024;

namespace serial {
void apply_stencil(const Stencil& L, std::span<const double> u, std::span<double> out);
void carre_du_champ(const Stencil& L, std::span<const double> u, std::span<const double> v,
                    std::span<double> out);
void gradient(std::span<const double> u, double h, bool periodic, std::span<double> out);
void second_difference(std::span<const double> u, double h, bool periodic, std::span<double> out);
double weighted_sum(std::span<const double> w, std::span<const double> a);
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
} // namespace serial

namespace parallel {
void apply_stencil(const Stencil& L, std::span<const double> u, std::span<double> out);
void carre_du_champ(const Stencil& L, std::span<const double> u, std::span<const double> v,
                    std::span<double> out);
void gradient(std::span<const double> u, double h, bool periodic, std::span<double> out);
void second_difference(std::span<const double> u, double h, bool periodic, std::span<double> out);
double weighted_sum(std::span<const double> w, std::span<const double> a);
double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
} // namespace parallel

} // namespace smms::kernels
