#pragma once

#include <cstddef>
#include <vector>

namespace smms {

// Three-point stencil (Lu)_i = lower_i u_{i-1} + diag_i u_i + upper_i u_{i+1}.
// With periodic = true the indices wrap; otherwise lower_0 = upper_{n-1} = 0.
struct Stencil {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    bool periodic = false;

    std::size_t size() const noexcept { return diag.size(); }
};

} // namespace smms
