#pragma once

#include <vector>

#include "smms/stencil.hpp"

namespace smms {

// Solves the (cyclic, if A.periodic) tridiagonal system A x = rhs.
// Thomas elimination; the cyclic case goes through Sherman-Morrison.
// Throws SolverError on a vanishing pivot.
std::vector<double> solve_tridiagonal(const Stencil& A, const std::vector<double>& rhs);

// I + scale * L as a stencil.
Stencil shifted_identity(const Stencil& L, double scale);

} // namespace smms
