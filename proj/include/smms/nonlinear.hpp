#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smms/field.hpp"
#include "smms/history.hpp"
#include "smms/report.hpp"

namespace smms {

/// Source term N(t, x, u) with exact partials N_u and N_x.
class NonlinearitySpec {
public:
    using Fn = std::function<double(double t, double x, double u)>;

    NonlinearitySpec(std::string id, std::vector<double> params, Fn n, Fn n_u, Fn n_x, bool autonomous);

    double operator()(double t, double x, double u) const { return n_(t, x, u); }
    double du(double t, double x, double u) const { return n_u_(t, x, u); }
    double dx(double t, double x, double u) const { return n_x_(t, x, u); }
    const std::string& id() const noexcept { return id_; }
    const std::vector<double>& params() const noexcept { return params_; }
    // True when N depends on u only.
    bool autonomous() const noexcept { return autonomous_; }
    bool is_zero() const noexcept { return id_ == "zero"; }

    static NonlinearitySpec zero();
    static NonlinearitySpec constant(double a);
    static NonlinearitySpec linear(double c);
    // c u^q
    static NonlinearitySpec power(double c, double q);
    // Source that makes u*(x,t) = base + sin(x) e^{-t} an exact solution of
    // u_t - (u^p)'' = N on the flat circle.
    static NonlinearitySpec manufactured(double p, double base = 2.0);
    static double manufactured_solution(double t, double x, double base = 2.0);

    struct RegistryEntry {
        std::string id;
        std::string params;
        std::string description;
    };
    static const std::vector<RegistryEntry>& registry();
    static NonlinearitySpec from_registry(const std::string& id, const std::vector<double>& params);

private:
    std::string id_;
    std::vector<double> params_;
    Fn n_;
    Fn n_u_;
    Fn n_x_;
    bool autonomous_;
};

enum class DiffusionMode { PME, FDE };

struct PMEConfig {
    double p = 1.5;
    DiffusionMode mode = DiffusionMode::PME;
    double m = 2.0;
    double k = 0.0;
    double dt = 1e-3;
    int record_every = 1;
    double newton_tol = 1e-12;
    double eps_pos = 1e-10;
    // Admit p = 1 + 1/sqrt(m - 1) (closed-manifold PME theorems).
    bool allow_endpoint = false;

    // Throws PreconditionError when p, m, k, dt or eps_pos violate the mode's ranges.
    void validate() const;
    // 1 + 1/sqrt(m - 1), infinite for m = 1.
    double pme_upper() const;
    // max(1/2, 1 - 1/sqrt(m - 1)).
    double fde_lower() const;
};

std::string to_string(DiffusionMode mode);

// u_t - L(u^p) = N by implicit Euler with Newton iterations on the
// tridiagonal Jacobian I - dt L diag(p u^{p-1}) - dt diag(N_u). Failed steps
// are split in half, at most 10 times; Newton is capped at 50 iterations.
SolutionHistory solve_diffusion(const SpacePtr& space, const ScalarField& u0, const PMEConfig& cfg,
                                const NonlinearitySpec& N, double t_final);

// PME: p u^{p-1} / (p - 1); FDE: u^{p - 1/2}.
ScalarField pressure(const ScalarField& u, const PMEConfig& cfg);
double pressure(double u, const PMEConfig& cfg);
double inverse_pressure(double v, const PMEConfig& cfg);

// Sigma (PME) or Sigma-star (FDE) of N rewritten in the pressure variable.
double sigma(double t, double x, double v, const PMEConfig& cfg, const NonlinearitySpec& N);
// (d/dv, d/dx) by the chain rule.
std::pair<double, double> sigma_partials(double t, double x, double v, const PMEConfig& cfg,
                                         const NonlinearitySpec& N);

// Sign conditions  (3 - 2p) N - 2 u N_u >= 0  and  (3 - 2p) N / u - 2 N_u >= 0
// over `samples` points of [u_lo, u_hi], with N evaluated at t = x = 0.
InequalityReport liouville_hypothesis_pme(const NonlinearitySpec& N, double p, std::pair<double, double> u_range,
                                          int samples = 200);
InequalityReport liouville_hypothesis_fde(const NonlinearitySpec& N, double p, std::pair<double, double> u_range,
                                          int samples = 200);

// Empirical constant of the local gradient estimate on Q_{R/2,T}(center),
// with t0 the last recorded time.
GradientBoundReport local_gradient_estimate_report(const SolutionHistory& history, const PMEConfig& cfg,
                                                   const NonlinearitySpec& N, double R, double T, double center);

/// Auxiliary C^2 function of v used by the A-variants of the global bounds.
struct AuxFunction {
    std::string id;
    std::vector<double> params;
    std::function<double(double)> g;
    std::function<double(double)> d1;
    std::function<double(double)> d2;

    static AuxFunction zero();
    static AuxFunction neg_log();
    // c v^r
    static AuxFunction power(double c, double r);
    static AuxFunction from_registry(const std::string& id, const std::vector<double>& params);
    static const std::vector<NonlinearitySpec::RegistryEntry>& registry();
};

enum class GlobalTheorem { PME_A, PME_B, FDE_A, FDE_B };
std::string to_string(GlobalTheorem t);
GlobalTheorem global_theorem_from_string(const std::string& s);

GradientBoundReport global_gradient_bound_check(const SolutionHistory& history, const PMEConfig& cfg,
                                                const NonlinearitySpec& N, GlobalTheorem theorem,
                                                std::optional<AuxFunction> aux = std::nullopt, double a = 0.0);

} // namespace smms
