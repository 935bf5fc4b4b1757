#pragma once

#include <limits>
#include <string>
#include <vector>

#include "smms/field.hpp"
#include "smms/report.hpp"

namespace smms {

inline constexpr double kInfiniteDimension = std::numeric_limits<double>::infinity();

// Second-order central differences; one-sided second order at interval ends.
ScalarField gradient(const ScalarField& f);
ScalarField second_derivative(const ScalarField& f);

// Delta_phi f = f'' - phi' f' in divergence form (see WeightedSpace::laplacian).
ScalarField laplacian_phi(const ScalarField& f);

// Carre du champ 1/2 [L(uv) - u Lv - v Lu], evaluated from the product definition.
ScalarField gamma1(const ScalarField& u, const ScalarField& v);
ScalarField gamma1(const ScalarField& u);
// Iterated carre du champ 1/2 L Gamma(u) - Gamma(u, Lu).
ScalarField gamma2(const ScalarField& u);

// phi'' - phi'^2 / (m - 1); phi'' for m = infinity. Throws for finite m <= 1.
ScalarField ricci_phi_m(const SpacePtr& space, double m);

struct CDParams {
    double k = 0;
    double m = kInfiniteDimension;

    // m >= 1; m = 1 only for a constant weight.
    static CDParams make(double k, double m, const WeightSpec& weight);
};

struct Probe {
    std::string name;
    ScalarField field;
};

// x, x^2, sin x and cos 2x (scaled to the domain) plus seeded band-limited fields.
std::vector<Probe> standard_probes(const SpacePtr& space, std::uint64_t seed = 0, int random_count = 3);

// Derivative scale of a probe from differencing: sup over interior nodes of
// |D1 w| + |D2 w| + |D3 w| + |D4 w|. cd_tolerance is 10 h^2 times this.
double probe_derivative_scale(const ScalarField& w);
double cd_tolerance(const ScalarField& w);

// Margins Gamma2(w) - (Lw)^2/m - k Gamma(w) at interior nodes for every probe.
InequalityReport cd_check(const SpacePtr& space, CDParams params, const std::vector<Probe>& probes);

// sup over interior nodes of |1/2 L|grad u|^2 - <grad u, grad L u> - |Hess u|^2 - Ric_phi(grad u, grad u)|.
double bochner_residual(const ScalarField& u);
// sup over interior nodes of |Gamma(u) - |grad u|^2|.
double gamma_identity_residual(const ScalarField& u);
// sup over interior nodes of |Gamma2(u) - (|Hess u|^2 + Ric_phi(grad u, grad u))|.
double gamma2_bochner_residual(const ScalarField& u);

// Jacobi polynomial P_k^{(alpha, beta)} by the three-term recurrence.
double jacobi_polynomial(int k, double alpha, double beta, double t);

// Discrete Jacobi operator (divergence form, measure (1-t)^alpha (1+t)^beta dt,
// diffusivity 1 - t^2) applied to P_k on Interval(-1+delta, 1-delta).
// Reports the interior residual sup |L y + k(k+alpha+beta+1) y| at `nodes` and 2*nodes,
// the Rayleigh-quotient eigenvalue, and passes iff the residual is within
// 10 h^2 (1 + lambda) sup|y| and shrinks by >= 3.5 under refinement (or is at rounding level).
InequalityReport jacobi_eigencheck(double alpha, double beta, int kdeg, std::size_t nodes = 400, double delta = 0.05);

} // namespace smms
