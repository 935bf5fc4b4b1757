#pragma once

#include "smms/field.hpp"
#include "smms/report.hpp"
#include "smms/semigroup.hpp"

namespace smms {

// W_2 between f dmu and g dmu (both rescaled to unit mass). Each node's mass
// is spread uniformly over its cell, so the CDFs and quantile functions are
// piecewise linear and the quantile integral is evaluated exactly. On a
// circle the quantile coupling is minimised over the cut.
double wasserstein2_1d(const ScalarField& f, const ScalarField& g);

// e^{-kt} W_2(f, g) - W_2(P_t f, P_t g) at the sampled times.
InequalityReport wasserstein_contraction_check(const SpacePtr& space, const ScalarField& f, const ScalarField& g,
                                               double k, const FlowConfig& cfg);

} // namespace smms
