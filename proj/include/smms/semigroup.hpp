#pragma once

#include <vector>

#include "smms/field.hpp"
#include "smms/history.hpp"
#include "smms/report.hpp"

namespace smms {

enum class Scheme { ImplicitEuler, Trapezoidal };

struct FlowConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    Scheme scheme = Scheme::Trapezoidal;
    // Keep every n-th step in the history (the final time is always kept).
    int record_every = 1;
    // Times at which decay/commutation/contraction checks sample the flow;
    // empty means ten evenly spaced times up to t_final.
    std::vector<double> sample_times;

    void validate() const;
    // sample_times, or the default ladder, snapped to the step lattice.
    std::vector<double> check_times() const;
};

// P_t f0 = e^{t L} f0 by (I - theta dt L) u^{n+1} = (I + (1 - theta) dt L) u^n,
// theta = 1/2 (trapezoidal) or 1 (implicit Euler). dt is shrunk so that it
// divides t_final.
SolutionHistory heat_flow(const SpacePtr& space, const ScalarField& f0, const FlowConfig& cfg);

// Final state only; convenience for chained flows.
ScalarField evolve(const ScalarField& f0, double t, double dt, Scheme scheme = Scheme::Trapezoidal);

// 5 (dt + h^2)(1 + t): relative tolerance shared by the semigroup checks.
double flow_tolerance(const WeightedSpace& space, const FlowConfig& cfg, double t);

DecayReport variance_decay_check(const SpacePtr& space, const ScalarField& f0, double k, const FlowConfig& cfg);
DecayReport entropy_decay_check(const SpacePtr& space, const ScalarField& f0, double k, const FlowConfig& cfg);

// Pointwise e^{-kt} P_t|grad f| - |grad P_t f| at interior nodes; implicit Euler.
InequalityReport commutation_check(const SpacePtr& space, const ScalarField& f0, double k, const FlowConfig& cfg);

// Var(f) <= E(f) / k.
InequalityReport poincare_check(const SpacePtr& space, const ScalarField& f, double k);
// Ent(f^2) <= 2 E(f) / k.
InequalityReport lsi_check(const SpacePtr& space, const ScalarField& f, double k = 1.0);

// ||P_t f||_2 <= ||f||_p at t* = -log(p - 1) / 2 and t* + 0.1.
InequalityReport hypercontractivity_check(const SpacePtr& space, const ScalarField& f, double p,
                                          const FlowConfig& cfg);

// Runs cd_check(k, inf) on the standard probes and records a warning if it fails.
bool certify_cd(const SpacePtr& space, double k, InequalityReport& into);

} // namespace smms
