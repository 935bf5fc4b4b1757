#include "smms/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smms/functionals.hpp"
#include "smms/kernels.hpp"
#include "smms/linalg.hpp"
#include "smms/operators.hpp"

namespace smms {

std::size_t SolutionHistory::index_near(double t) const {
    if (times.empty()) throw PreconditionError("SolutionHistory: empty history");
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0;
    if (it == times.end()) return times.size() - 1;
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    return (t - times[j - 1] <= times[j] - t) ? j - 1 : j;
}

void SolutionHistory::push(double t, ScalarField f) {
    if (!times.empty() && !(t > times.back())) throw SolverError("SolutionHistory: times must increase");
    times.push_back(t);
    fields.push_back(std::move(f));
}

namespace {

std::size_t step_count(double t, double dt) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t / dt - 1e-9)));
}

struct Stepper {
    Stencil implicit_part;
    Stencil explicit_part;
    bool has_explicit = false;

    Stepper(const Stencil& L, double dt, Scheme scheme) {
        const double theta = scheme == Scheme::Trapezoidal ? 0.5 : 1.0;
        implicit_part = shifted_identity(L, -theta * dt);
        if (theta < 1.0) {
            explicit_part = shifted_identity(L, (1.0 - theta) * dt);
            has_explicit = true;
        }
    }

    std::vector<double> step(const std::vector<double>& u) const {
        if (!has_explicit) return solve_tridiagonal(implicit_part, u);
        std::vector<double> rhs(u.size());
        kernels::parallel::apply_stencil(explicit_part, u, rhs);
        return solve_tridiagonal(implicit_part, rhs);
    }
};

std::vector<double> abs_gradient(const ScalarField& f) {
    const ScalarField g = gradient(f);
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::abs(g[i]);
    return out;
}

double sup_abs(std::span<const double> v) {
    double s = 0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

} // namespace

void FlowConfig::validate() const {
    if (!(dt > 0)) throw PreconditionError("flow: dt must be > 0");
    if (!(t_final > 0)) throw PreconditionError("flow: t_final must be > 0");
    if (dt > t_final) throw PreconditionError("flow: dt must not exceed t_final");
    if (record_every < 1) throw PreconditionError("flow: record_every must be >= 1");
    for (double t : sample_times) {
        if (!(t > 0 && t <= t_final + 1e-12)) throw PreconditionError("flow: sample times must lie in (0, t_final]");
    }
}

std::vector<double> FlowConfig::check_times() const {
    const std::size_t n = step_count(t_final, dt);
    const double h = t_final / static_cast<double>(n);
    std::vector<double> raw = sample_times;
    if (raw.empty()) {
        for (int j = 1; j <= 10; ++j) raw.push_back(t_final * j / 10.0);
    }
    std::vector<double> out;
    for (double t : raw) {
        const double snapped = std::max(1.0, std::round(t / h)) * h;
        if (out.empty() || snapped > out.back()) out.push_back(snapped);
    }
    return out;
}

SolutionHistory heat_flow(const SpacePtr& space, const ScalarField& f0, const FlowConfig& cfg) {
    cfg.validate();
    if (f0.space() != space) throw PreconditionError("heat_flow: initial field lives on a different space");
    const std::size_t n = step_count(cfg.t_final, cfg.dt);
    const double dt = cfg.t_final / static_cast<double>(n);
    const Stepper stepper(space->laplacian(), dt, cfg.scheme);

    SolutionHistory hist;
    hist.space = space;
    hist.push(0.0, f0);
    std::vector<double> u(f0.values().begin(), f0.values().end());
    double mass = integrate(*space, u);
    for (std::size_t j = 1; j <= n; ++j) {
        u = stepper.step(u);
        const double t = dt * static_cast<double>(j);
        const double new_mass = integrate(*space, u);
        StepDiagnostics d;
        d.t = t;
        d.dt = dt;
        d.residual = std::abs(new_mass - mass);
        mass = new_mass;
        hist.diagnostics.push_back(d);
        if (j % static_cast<std::size_t>(cfg.record_every) == 0 || j == n) {
            hist.push(t, ScalarField(space, u));
        }
    }
    return hist;
}

ScalarField evolve(const ScalarField& f0, double t, double dt, Scheme scheme) {
    if (t <= 0) return f0;
    FlowConfig cfg;
    cfg.dt = std::min(dt, t);
    cfg.t_final = t;
    cfg.scheme = scheme;
    cfg.record_every = std::numeric_limits<int>::max();
    return heat_flow(f0.space(), f0, cfg).final();
}

double flow_tolerance(const WeightedSpace& space, const FlowConfig& cfg, double t) {
    return 5.0 * (cfg.dt + space.h() * space.h()) * (1.0 + t);
}

bool certify_cd(const SpacePtr& space, double k, InequalityReport& into) {
    const InequalityReport cd = cd_check(space, CDParams{k, kInfiniteDimension}, standard_probes(space));
    into.note("cd_certified", cd.passed() ? "yes" : "no");
    into.note("cd_worst_margin", cd.worst_margin());
    if (!cd.passed()) {
        into.warn("CD(" + format_number(k) + ",inf) not certified on the standard probes; worst margin " +
                  format_number(cd.worst_margin()));
    }
    return cd.passed();
}

namespace {

DecayReport decay_check(const char* name, const SpacePtr& space, const ScalarField& f0, double k,
                        const FlowConfig& cfg, double (*functional)(const ScalarField&), double floor_scale) {
    DecayReport rep;
    rep.inequality = InequalityReport(name, 0.0);
    certify_cd(space, k, rep.inequality);
    rep.inequality.note("k", k);
    rep.inequality.note("tolerance_rule", "5*(dt+h^2)*(1+t) relative");

    const SolutionHistory hist = heat_flow(space, f0, cfg);
    const double v0 = functional(f0);
    rep.inequality.note("initial_value", v0);
    for (double t : cfg.check_times()) {
        const double vt = functional(hist.at(t));
        const double rate = std::exp(-2.0 * k * t);
        const double bound = rate * v0;
        const double tol = flow_tolerance(*space, cfg, t) * std::abs(bound) + 1e-14 * floor_scale;
        rep.inequality.add("flow", kNotApplicable, t, vt, bound, tol);
        rep.times.push_back(t);
        const double ratio = v0 != 0 ? vt / v0 : 0.0;
        rep.observed_ratio.push_back(ratio);
        rep.theoretical_rate.push_back(rate);
        if (v0 != 0) rep.worst_excess = std::max(rep.worst_excess, ratio / rate - 1.0);
    }
    rep.inequality.finalize();
    return rep;
}

} // namespace

DecayReport variance_decay_check(const SpacePtr& space, const ScalarField& f0, double k, const FlowConfig& cfg) {
    const double s = sup_abs(f0.values());
    return decay_check("variance_decay", space, f0, k, cfg, &variance, 1.0 + s * s);
}

DecayReport entropy_decay_check(const SpacePtr& space, const ScalarField& f0, double k, const FlowConfig& cfg) {
    if (!(f0.min() > 0)) throw PreconditionError("entropy_decay_check: f0 must be > 0");
    const double s = sup_abs(f0.values());
    return decay_check("entropy_decay", space, f0, k, cfg, &entropy, 1.0 + s * std::abs(std::log(s)));
}

InequalityReport commutation_check(const SpacePtr& space, const ScalarField& f0, double k, const FlowConfig& cfg) {
    InequalityReport rep("commutation", 0.0);
    certify_cd(space, k, rep);
    rep.note("k", k);
    rep.note("scheme", "implicit_euler");

    FlowConfig ie = cfg;
    ie.scheme = Scheme::ImplicitEuler;
    const ScalarField g0(space, abs_gradient(f0));
    const SolutionHistory hf = heat_flow(space, f0, ie);
    const SolutionHistory hg = heat_flow(space, g0, ie);
    const double scale = sup_abs(g0.values());
    // Rounding in P_t f shows up in its difference quotients at about eps |f| / h.
    const double floor = 64 * std::numeric_limits<double>::epsilon() * sup_abs(f0.values()) / space->h();
    const std::size_t margin = space->interior_margin();
    for (double t : ie.check_times()) {
        const std::vector<double> lhs = abs_gradient(hf.at(t));
        const ScalarField& rhs = hg.at(t);
        const double decay = std::exp(-k * t);
        const double tol = flow_tolerance(*space, ie, t) * scale + floor;
        for (std::size_t i = margin; i + margin < space->size(); ++i) {
            rep.add("node", space->nodes()[i], t, lhs[i], decay * rhs[i], tol);
        }
    }
    rep.finalize();
    return rep;
}

InequalityReport poincare_check(const SpacePtr& space, const ScalarField& f, double k) {
    if (!(k > 0)) throw PreconditionError("poincare_check: k must be > 0");
    if (f.space() != space) throw PreconditionError("poincare_check: field lives on a different space");
    if (!space->normalized()) throw PreconditionError("poincare_check: space must be normalized");
    const double var = variance(f);
    const double bound = energy(f) / k;
    const double h = space->h();
    InequalityReport rep("poincare", 10.0 * h * h * std::max(std::abs(var), std::abs(bound)) + 1e-13);
    rep.note("k", k);
    rep.add("f", kNotApplicable, kNotApplicable, var, bound);
    rep.finalize();
    return rep;
}

InequalityReport lsi_check(const SpacePtr& space, const ScalarField& f, double k) {
    if (!(k > 0)) throw PreconditionError("lsi_check: k must be > 0");
    if (f.space() != space) throw PreconditionError("lsi_check: field lives on a different space");
    if (!space->normalized()) throw PreconditionError("lsi_check: space must be normalized");
    if (!(f.min() > 0)) throw PreconditionError("lsi_check: f must be > 0");
    const double ent = entropy(f * f);
    const double bound = 2.0 * energy(f) / k;
    const double h = space->h();
    InequalityReport rep("lsi", 10.0 * h * h * std::max(std::abs(ent), std::abs(bound)) + 1e-13);
    rep.note("k", k);
    rep.add("f", kNotApplicable, kNotApplicable, ent, bound);
    rep.finalize();
    return rep;
}

InequalityReport hypercontractivity_check(const SpacePtr& space, const ScalarField& f, double p,
                                          const FlowConfig& cfg) {
    if (!(p > 1 && p < 2)) throw PreconditionError("hypercontractivity_check: p must lie in (1, 2)");
    if (!(f.min() > 0)) throw PreconditionError("hypercontractivity_check: f must be > 0");
    if (!space->normalized()) throw PreconditionError("hypercontractivity_check: space must be normalized");
    if (!(cfg.dt > 0)) throw PreconditionError("hypercontractivity_check: dt must be > 0");

    InequalityReport rep("hypercontractivity", 0.0);
    certify_cd(space, 1.0, rep);
    const double t_star = -0.5 * std::log(p - 1.0);
    rep.note("p", p);
    rep.note("t_critical", t_star);

    const double rhs = lp_norm(f, p);
    const ScalarField at_star = evolve(f, t_star, cfg.dt, cfg.scheme);
    const ScalarField after = evolve(at_star, 0.1, cfg.dt, cfg.scheme);
    rep.add("critical", kNotApplicable, t_star, lp_norm(at_star, 2.0), rhs,
            flow_tolerance(*space, cfg, t_star) * rhs);
    rep.add("interior", kNotApplicable, t_star + 0.1, lp_norm(after, 2.0), rhs,
            flow_tolerance(*space, cfg, t_star + 0.1) * rhs);
    rep.finalize();
    return rep;
}

} // namespace smms
