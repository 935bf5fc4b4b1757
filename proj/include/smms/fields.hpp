#pragma once

#include <cstdint>

#include "smms/field.hpp"

namespace smms {

// base + sum_k a_k sin(k * freq * x + theta_k) with sum_k |a_k| = amplitude,
// drawn from a seeded generator. Strictly positive whenever amplitude < base.
// freq <= 0 picks 2 pi / length on circles and 1/2 otherwise.
ScalarField random_bandlimited(const SpacePtr& space, std::uint64_t seed, int modes = 4, double amplitude = 0.5,
                               double base = 1.0, double freq = 0.0);

} // namespace smms
