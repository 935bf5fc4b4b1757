#pragma once

#include <cstddef>
#include <vector>

#include "smms/field.hpp"

namespace smms {

struct StepDiagnostics {
    double t = 0;
    double dt = 0;
    int newton_iterations = 0;
    double residual = 0;
    int halvings = 0;
};

/// Space-time record of a computed diffusion solution.
struct SolutionHistory {
    SpacePtr space;
    std::vector<double> times;
    std::vector<ScalarField> fields;
    std::vector<StepDiagnostics> diagnostics;

    std::size_t size() const noexcept { return times.size(); }
    const ScalarField& initial() const { return fields.front(); }
    const ScalarField& final() const { return fields.back(); }
    // Index of the recorded time nearest to t.
    std::size_t index_near(double t) const;
    const ScalarField& at(double t) const { return fields[index_near(t)]; }
    void push(double t, ScalarField f);
};

} // namespace smms
