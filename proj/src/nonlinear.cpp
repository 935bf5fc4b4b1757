#include "smms/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smms/kernels.hpp"
#include "smms/linalg.hpp"
#include "smms/operators.hpp"

namespace smms {

namespace {

double param(const std::vector<double>& p, std::size_t i, double fallback) {
    return i < p.size() ? p[i] : fallback;
}

double sup_abs(std::span<const double> v) {
    double s = 0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

} // namespace

// ---------------------------------------------------------------------------
// NonlinearitySpec

NonlinearitySpec::NonlinearitySpec(std::string id, std::vector<double> params, Fn n, Fn n_u, Fn n_x,
                                   bool autonomous)
    : id_(std::move(id)), params_(std::move(params)), n_(std::move(n)), n_u_(std::move(n_u)),
      n_x_(std::move(n_x)), autonomous_(autonomous) {}

NonlinearitySpec NonlinearitySpec::zero() {
    auto z = [](double, double, double) { return 0.0; };
    return NonlinearitySpec("zero", {}, z, z, z, true);
}

NonlinearitySpec NonlinearitySpec::constant(double a) {
    auto z = [](double, double, double) { return 0.0; };
    return NonlinearitySpec("constant", {a}, [=](double, double, double) { return a; }, z, z, true);
}

NonlinearitySpec NonlinearitySpec::linear(double c) {
    auto z = [](double, double, double) { return 0.0; };
    return NonlinearitySpec(
        "linear", {c}, [=](double, double, double u) { return c * u; }, [=](double, double, double) { return c; }, z,
        true);
}

NonlinearitySpec NonlinearitySpec::power(double c, double q) {
    auto z = [](double, double, double) { return 0.0; };
    return NonlinearitySpec(
        "power", {c, q}, [=](double, double, double u) { return c * std::pow(u, q); },
        [=](double, double, double u) { return c * q * std::pow(u, q - 1.0); }, z, true);
}

double NonlinearitySpec::manufactured_solution(double t, double x, double base) {
    return base + std::sin(x) * std::exp(-t);
}

NonlinearitySpec NonlinearitySpec::manufactured(double p, double base) {
    // u = base + s E, u' = c E, u'' = -s E with s = sin x, c = cos x, E = e^{-t}.
    // N = u_t - (u^p)'' = -s E - p(p-1) u^{p-2} c^2 E^2 + p u^{p-1} s E.
    auto n = [=](double t, double x, double) {
        const double s = std::sin(x), c = std::cos(x), E = std::exp(-t);
        const double u = base + s * E;
        return -s * E - p * (p - 1) * std::pow(u, p - 2) * c * c * E * E + p * std::pow(u, p - 1) * s * E;
    };
    auto nx = [=](double t, double x, double) {
        const double s = std::sin(x), c = std::cos(x), E = std::exp(-t);
        const double u = base + s * E;
        const double ux = c * E;
        const double a = (p - 2) * std::pow(u, p - 3) * ux * c * c * E * E - 2.0 * std::pow(u, p - 2) * c * s * E * E;
        const double b = (p - 1) * std::pow(u, p - 2) * ux * s * E + std::pow(u, p - 1) * c * E;
        return -c * E - p * (p - 1) * a + p * b;
    };
    auto z = [](double, double, double) { return 0.0; };
    return NonlinearitySpec("manufactured", {p, base}, n, z, nx, false);
}

const std::vector<NonlinearitySpec::RegistryEntry>& NonlinearitySpec::registry() {
    static const std::vector<RegistryEntry> entries = {
        {"zero", "", "N = 0"},
        {"constant", "a", "N = a"},
        {"linear", "c", "N = c u"},
        {"power", "c q", "N = c u^q"},
        {"manufactured", "p base=2", "source making base + sin(x) e^{-t} exact on the flat circle"},
    };
    return entries;
}

NonlinearitySpec NonlinearitySpec::from_registry(const std::string& id, const std::vector<double>& p) {
    if (id == "zero") return zero();
    if (id == "constant") return constant(param(p, 0, 0.0));
    if (id == "linear") return linear(param(p, 0, 1.0));
    if (id == "power") return power(param(p, 0, 1.0), param(p, 1, 1.0));
    if (id == "manufactured") {
        if (p.empty()) throw ParseError("nonlinearity 'manufactured' needs the exponent p");
        return manufactured(p[0], param(p, 1, 2.0));
    }
    throw ParseError("unknown nonlinearity registry id '" + id + "'");
}

// ---------------------------------------------------------------------------
// PMEConfig

std::string to_string(DiffusionMode mode) { return mode == DiffusionMode::PME ? "pme" : "fde"; }

double PMEConfig::pme_upper() const {
    return m == 1.0 ? std::numeric_limits<double>::infinity() : 1.0 + 1.0 / std::sqrt(m - 1.0);
}

double PMEConfig::fde_lower() const {
    if (m <= 1.0) return 0.5;
    return std::max(0.5, 1.0 - 1.0 / std::sqrt(m - 1.0));
}

void PMEConfig::validate() const {
    if (!(m >= 1.0)) throw PreconditionError("m must be >= 1, got " + format_number(m));
    if (!(k >= 0.0)) throw PreconditionError("k must be >= 0, got " + format_number(k));
    if (!(dt > 0.0)) throw PreconditionError("dt must be > 0");
    if (record_every < 1) throw PreconditionError("record_every must be >= 1");
    if (!(newton_tol > 0.0)) throw PreconditionError("newton tolerance must be > 0");
    if (!(eps_pos > 0.0 && eps_pos <= 1e-8)) throw PreconditionError("eps_pos must lie in (0, 1e-8]");
    if (mode == DiffusionMode::PME) {
        const double hi = pme_upper();
        const bool ok = p > 1.0 && (p < hi || (allow_endpoint && p <= hi));
        if (!ok) {
            throw PreconditionError("pme: p = " + format_number(p) + " outside (1, " + format_number(hi) +
                                    (allow_endpoint ? "]" : ")") + " for m = " + format_number(m));
        }
    } else {
        const double lo = fde_lower();
        if (!(p > lo && p < 1.0)) {
            throw PreconditionError("fde: p = " + format_number(p) + " outside (" + format_number(lo) +
                                    ", 1) for m = " + format_number(m));
        }
    }
}

// ---------------------------------------------------------------------------
// Solver

namespace {

struct StepResult {
    std::vector<double> u;
    bool ok = false;
    int iterations = 0;
    double residual = 0;
    std::string failure;
};

class DiffusionStepper {
public:
    DiffusionStepper(const SpacePtr& space, const PMEConfig& cfg, const NonlinearitySpec& N)
        : space_(space), cfg_(cfg), N_(N), L_(space->laplacian()) {}

    StepResult newton(const std::vector<double>& u_old, double t_new, double dt) const {
        const std::size_t n = u_old.size();
        const auto x = space_->nodes();
        const double p = cfg_.p;
        const double scale = 1.0 + sup_abs(u_old);
        StepResult r;
        r.u = u_old;
        std::vector<double> up(n), Lup(n), F(n), d(n);
        Stencil J = L_;
        for (int it = 1; it <= 50; ++it) {
            r.iterations = it;
            for (std::size_t i = 0; i < n; ++i) {
                up[i] = std::pow(r.u[i], p);
                d[i] = p * std::pow(r.u[i], p - 1.0);
            }
            kernels::parallel::apply_stencil(L_, up, Lup);
            for (std::size_t i = 0; i < n; ++i) {
                F[i] = r.u[i] - dt * Lup[i] - dt * N_(t_new, x[i], r.u[i]) - u_old[i];
                const std::size_t im = i == 0 ? n - 1 : i - 1;
                const std::size_t ip = i + 1 == n ? 0 : i + 1;
                J.lower[i] = -dt * L_.lower[i] * d[im];
                J.upper[i] = -dt * L_.upper[i] * d[ip];
                J.diag[i] = 1.0 - dt * L_.diag[i] * d[i] - dt * N_.du(t_new, x[i], r.u[i]);
                F[i] = -F[i];
            }
            r.residual = sup_abs(F);
            std::vector<double> delta;
            try {
                delta = solve_tridiagonal(J, F);
            } catch (const SolverError& e) {
                r.failure = e.what();
                return r;
            }
            for (std::size_t i = 0; i < n; ++i) r.u[i] += delta[i];
            double lowest = std::numeric_limits<double>::infinity();
            for (double v : r.u) lowest = std::min(lowest, v);
            if (!(lowest > cfg_.eps_pos)) {
                r.failure = "positivity lost (min u = " + format_number(lowest) + ")";
                return r;
            }
            if (sup_abs(delta) <= cfg_.newton_tol * scale) {
                r.ok = true;
                return r;
            }
        }
        r.failure = "Newton did not converge in 50 iterations (residual " + format_number(r.residual) + ")";
        return r;
    }

    // Advances u from t to t + dt, splitting the step in half on failure.
    std::vector<double> advance(const std::vector<double>& u, double t, double dt, int depth,
                                StepDiagnostics& diag) const {
        StepResult r = newton(u, t + dt, dt);
        diag.newton_iterations += r.iterations;
        if (r.ok) {
            diag.residual = std::max(diag.residual, r.residual);
            return std::move(r.u);
        }
        if (depth >= 10) {
            throw SolverError("solve_diffusion: step at t = " + format_number(t) + " failed after 10 halvings: " +
                              r.failure + "; newton iterations " + std::to_string(diag.newton_iterations));
        }
        diag.halvings = std::max(diag.halvings, depth + 1);
        const std::vector<double> mid = advance(u, t, 0.5 * dt, depth + 1, diag);
        return advance(mid, t + 0.5 * dt, 0.5 * dt, depth + 1, diag);
    }

private:
    SpacePtr space_;
    const PMEConfig& cfg_;
    const NonlinearitySpec& N_;
    const Stencil& L_;
};

} // namespace

SolutionHistory solve_diffusion(const SpacePtr& space, const ScalarField& u0, const PMEConfig& cfg,
                                const NonlinearitySpec& N, double t_final) {
    cfg.validate();
    if (u0.space() != space) throw PreconditionError("solve_diffusion: u0 lives on a different space");
    if (!(t_final > 0)) throw PreconditionError("solve_diffusion: t_final must be > 0");
    if (!(u0.min() >= cfg.eps_pos)) {
        throw PreconditionError("solve_diffusion: u0 must be >= eps_pos, min is " + format_number(u0.min()));
    }
    const std::size_t steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_final / cfg.dt - 1e-9)));
    const double dt = t_final / static_cast<double>(steps);
    const DiffusionStepper stepper(space, cfg, N);

    SolutionHistory hist;
    hist.space = space;
    hist.push(0.0, u0);
    std::vector<double> u(u0.values().begin(), u0.values().end());
    for (std::size_t j = 1; j <= steps; ++j) {
        const double t = dt * static_cast<double>(j - 1);
        StepDiagnostics diag;
        diag.dt = dt;
        u = stepper.advance(u, t, dt, 0, diag);
        diag.t = dt * static_cast<double>(j);
        hist.diagnostics.push_back(diag);
        if (j % static_cast<std::size_t>(cfg.record_every) == 0 || j == steps) {
            hist.push(diag.t, ScalarField(space, u));
        }
    }
    return hist;
}

// ---------------------------------------------------------------------------
// Pressure and Sigma

double pressure(double u, const PMEConfig& cfg) {
    if (!(u > 0)) throw PreconditionError("pressure: u must be > 0");
    const double p = cfg.p;
    if (cfg.mode == DiffusionMode::PME) {
        if (!(p > 1)) throw PreconditionError("pressure: PME mode needs p > 1");
        return p * std::pow(u, p - 1.0) / (p - 1.0);
    }
    if (!(p > 0.5 && p < 1)) throw PreconditionError("pressure: FDE mode needs 1/2 < p < 1");
    return std::pow(u, p - 0.5);
}

double inverse_pressure(double v, const PMEConfig& cfg) {
    if (!(v > 0)) throw PreconditionError("inverse_pressure: v must be > 0");
    const double p = cfg.p;
    if (cfg.mode == DiffusionMode::PME) return std::pow((p - 1.0) * v / p, 1.0 / (p - 1.0));
    return std::pow(v, 1.0 / (p - 0.5));
}

ScalarField pressure(const ScalarField& u, const PMEConfig& cfg) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] >= cfg.eps_pos)) {
            throw PreconditionError("pressure: u below eps_pos at node " + std::to_string(i));
        }
        v[i] = pressure(u[i], cfg);
    }
    return ScalarField(u.space(), std::move(v));
}

double sigma(double t, double x, double v, const PMEConfig& cfg, const NonlinearitySpec& N) {
    if (!(v > 0)) throw PreconditionError("sigma: v must be > 0");
    const double u = inverse_pressure(v, cfg);
    if (cfg.mode == DiffusionMode::PME) {
        const double p = cfg.p;
        return p * std::pow((p - 1.0) * v / p, (p - 2.0) / (p - 1.0)) * N(t, x, u);
    }
    const double q = cfg.p - 0.5;
    return q * std::pow(v, 1.0 - 1.0 / q) * N(t, x, u);
}

std::pair<double, double> sigma_partials(double t, double x, double v, const PMEConfig& cfg,
                                         const NonlinearitySpec& N) {
    if (!(v > 0)) throw PreconditionError("sigma_partials: v must be > 0");
    const double u = inverse_pressure(v, cfg);
    const double n = N(t, x, u), nu = N.du(t, x, u), nx = N.dx(t, x, u);
    if (cfg.mode == DiffusionMode::PME) {
        const double p = cfg.p;
        return {(p - 2.0) * n / u + nu, p * std::pow(u, p - 2.0) * nx};
    }
    const double q = cfg.p - 0.5;
    return {(q - 1.0) * n / u + nu, q * std::pow(u, q - 1.0) * nx};
}

// ---------------------------------------------------------------------------
// Liouville hypotheses

namespace {

InequalityReport liouville_common(const char* name, const NonlinearitySpec& N, double p,
                                  std::pair<double, double> range, int samples, bool fde) {
    const auto [lo, hi] = range;
    if (!(lo > 0 && hi > lo)) throw PreconditionError(std::string(name) + ": u range must be a positive interval");
    if (samples < 100) throw PreconditionError(std::string(name) + ": need at least 100 samples");
    InequalityReport rep(name, 0.0);
    rep.note("p", p);
    rep.note("u_min", lo);
    rep.note("u_max", hi);
    if (!N.autonomous()) rep.warn("nonlinearity depends on (t, x); evaluated at t = 0, x = 0");
    double scale = 0;
    std::vector<std::pair<double, double>> vals;
    for (int j = 0; j < samples; ++j) {
        const double u = lo * std::pow(hi / lo, static_cast<double>(j) / (samples - 1));
        const double n = N(0.0, 0.0, u), nu = N.du(0.0, 0.0, u);
        const double expr = fde ? (3.0 - 2.0 * p) * n / u - 2.0 * nu : (3.0 - 2.0 * p) * n - 2.0 * u * nu;
        const double mag = fde ? std::abs((3.0 - 2.0 * p) * n / u) + std::abs(2.0 * nu)
                               : std::abs((3.0 - 2.0 * p) * n) + std::abs(2.0 * u * nu);
        scale = std::max(scale, mag);
        vals.emplace_back(u, expr);
    }
    rep.set_tol(1e-12 * scale);
    for (const auto& [u, e] : vals) rep.add("u", u, kNotApplicable, 0.0, e);
    rep.finalize();
    return rep;
}

} // namespace

InequalityReport liouville_hypothesis_pme(const NonlinearitySpec& N, double p, std::pair<double, double> u_range,
                                          int samples) {
    return liouville_common("pme_liouville_hypothesis", N, p, u_range, samples, false);
}

InequalityReport liouville_hypothesis_fde(const NonlinearitySpec& N, double p, std::pair<double, double> u_range,
                                          int samples) {
    return liouville_common("fde_liouville_hypothesis", N, p, u_range, samples, true);
}

// ---------------------------------------------------------------------------
// Gradient estimates

namespace {

struct PressureSlice {
    double t;
    std::vector<double> v;
    std::vector<double> grad;
};

std::vector<PressureSlice> pressure_slices(const SolutionHistory& h, const PMEConfig& cfg) {
    std::vector<PressureSlice> out;
    out.reserve(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
        const ScalarField v = pressure(h.fields[j], cfg);
        const ScalarField g = gradient(v);
        out.push_back({h.times[j], {v.values().begin(), v.values().end()}, {g.values().begin(), g.values().end()}});
    }
    return out;
}

// Ric_phi^m >= -(m - 1) k at the listed nodes.
Hypothesis ricci_hypothesis(const SpacePtr& space, const PMEConfig& cfg, const std::vector<std::size_t>& nodes) {
    std::vector<double> ric(space->size(), 0.0);
    if (cfg.m > 1.0) {
        const ScalarField r = ricci_phi_m(space, cfg.m);
        ric.assign(r.values().begin(), r.values().end());
    } else {
        for (std::size_t i = 0; i < space->size(); ++i) ric[i] = space->weight().d2(space->nodes()[i]);
    }
    const double bound = -(cfg.m - 1.0) * cfg.k;
    Hypothesis h{"ricci_lower_bound", true, std::numeric_limits<double>::infinity(), "Ric_phi^m + (m-1)k >= 0"};
    for (std::size_t i : nodes) h.witness = std::min(h.witness, ric[i] - bound);
    h.holds = h.witness >= -1e-12;
    return h;
}

void check_theorem_range(const PMEConfig& cfg, bool closed_manifold) {
    PMEConfig c = cfg;
    c.allow_endpoint = closed_manifold && cfg.mode == DiffusionMode::PME;
    c.validate();
}

} // namespace

GradientBoundReport local_gradient_estimate_report(const SolutionHistory& history, const PMEConfig& cfg,
                                                   const NonlinearitySpec& N, double R, double T, double center) {
    check_theorem_range(cfg, false);
    if (history.size() < 2) throw PreconditionError("local estimate: history needs at least two time levels");
    const SpacePtr& space = history.space;
    if (!(R > 0 && T > 0)) throw PreconditionError("local estimate: R and T must be > 0");
    if (space->periodic()) {
        if (R > 0.5 * space->length()) throw PreconditionError("local estimate: ball exceeds the circle");
    } else if (center - R < space->lower() || center + R > space->upper()) {
        throw PreconditionError("local estimate: ball exceeds the domain");
    }
    const double t0 = history.times.back();
    const double t_base = t0 - T;
    if (t_base < history.times.front() - 1e-12) {
        throw PreconditionError("local estimate: cylinder extends below the first recorded time");
    }

    const bool pme = cfg.mode == DiffusionMode::PME;
    const double p = cfg.p, k = cfg.k;
    GradientBoundReport out;
    out.theorem = pme ? "pme-local" : "fde-local";
    out.inequality = InequalityReport(out.theorem, 0.0);
    out.sup_convention = "sup over Q_{R,T}";

    std::vector<std::size_t> ball, half;
    for (std::size_t i = 0; i < space->size(); ++i) {
        const double d = std::abs(space->distance(center, space->nodes()[i]));
        if (d <= R) ball.push_back(i);
        if (d <= 0.5 * R) half.push_back(i);
    }
    if (half.empty()) throw PreconditionError("local estimate: no grid nodes in the half ball");
    out.inequality.add_hypothesis(ricci_hypothesis(space, cfg, ball));

    const auto slices = pressure_slices(history, cfg);
    double M = 0, sup_sv = 0, sup_sx = 0;
    for (const auto& s : slices) {
        if (s.t < t_base - 1e-12) continue;
        for (std::size_t i : ball) {
            const double x = space->nodes()[i], v = s.v[i];
            M = std::max(M, v);
            const double sg = sigma(s.t, x, v, cfg, N);
            const auto [sv, sx] = sigma_partials(s.t, x, v, cfg, N);
            if (pme) {
                const double br = std::max(0.0, 2.0 * sv + sg / ((p - 1.0) * v));
                sup_sv = std::max(sup_sv, std::pow(v, p / (2.0 * (p - 1.0))) * std::sqrt(br));
                sup_sx = std::max(sup_sx, std::cbrt(std::pow(v, (2.0 * p + 1.0) / (2.0 * (p - 1.0))) * std::abs(sx)));
            } else {
                sup_sv = std::max(sup_sv, std::pow(v, p / (2.0 * p - 1.0)) * std::sqrt(std::max(0.0, sv)));
                sup_sx = std::max(sup_sx, std::pow(v, 2.0 * p / (3.0 * (2.0 * p - 1.0))) * std::cbrt(std::abs(sx)));
            }
        }
    }
    const double geo = std::pow(k, 0.25) / std::sqrt(R) + 1.0 / R + std::sqrt(k);
    const double m_geo = pme ? std::pow(M, 1.0 + 1.0 / (2.0 * (p - 1.0))) : M;
    const double m_time = pme ? std::pow(M, p / (2.0 * (p - 1.0))) : std::pow(M, p / (2.0 * p - 1.0));

    struct Point {
        double x, t, lhs, bracket;
    };
    std::vector<Point> pts;
    double c_emp = 0;
    for (const auto& s : slices) {
        if (!(s.t > t_base + 1e-12)) continue;
        const double time_term = m_time / std::sqrt(s.t - t_base);
        const double bracket = geo * m_geo + sup_sv + time_term + sup_sx;
        for (std::size_t i : half) {
            const double v = s.v[i], g = std::abs(s.grad[i]);
            const double lhs = pme ? std::pow(v, 1.0 / (2.0 * (p - 1.0))) * g : g;
            pts.push_back({space->nodes()[i], s.t, lhs, bracket});
            if (bracket > 0) c_emp = std::max(c_emp, lhs / bracket);
        }
    }
    out.sup_v = M;
    out.curvature_const = (p - 1.0) * (cfg.m - 1.0) * k;
    out.empirical_constant = c_emp;
    for (const auto& q : pts) out.inequality.add("point", q.x, q.t, q.lhs, c_emp * q.bracket);
    out.inequality.note("empirical_constant", c_emp);
    out.inequality.note("sup_v", M);
    out.inequality.note("R", R);
    out.inequality.note("T", T);
    out.inequality.note("center", center);
    out.inequality.note("rhs_convention", "C_emp * bracket");
    out.inequality.note("sup_convention", out.sup_convention);
    if (!std::isfinite(c_emp)) out.inequality.add("empirical_constant_finite", kNotApplicable, kNotApplicable, 1, 0);
    out.inequality.set_tol(1e-12 * (1.0 + c_emp));
    out.inequality.finalize();
    return out;
}

// ---------------------------------------------------------------------------
// Closed-manifold bounds

AuxFunction AuxFunction::zero() {
    auto z = [](double) { return 0.0; };
    return {"zero", {}, z, z, z};
}

AuxFunction AuxFunction::neg_log() {
    return {"neg_log", {}, [](double v) { return -std::log(v); }, [](double v) { return -1.0 / v; },
            [](double v) { return 1.0 / (v * v); }};
}

AuxFunction AuxFunction::power(double c, double r) {
    return {"power", {c, r}, [=](double v) { return c * std::pow(v, r); },
            [=](double v) { return c * r * std::pow(v, r - 1.0); },
            [=](double v) { return c * r * (r - 1.0) * std::pow(v, r - 2.0); }};
}

const std::vector<NonlinearitySpec::RegistryEntry>& AuxFunction::registry() {
    static const std::vector<NonlinearitySpec::RegistryEntry> entries = {
        {"zero", "", "Gamma(v) = 0"},
        {"neg_log", "", "Gamma(v) = -log v"},
        {"power", "c r", "Gamma(v) = c v^r"},
    };
    return entries;
}

AuxFunction AuxFunction::from_registry(const std::string& id, const std::vector<double>& p) {
    if (id == "zero") return zero();
    if (id == "neg_log") return neg_log();
    if (id == "power") return power(param(p, 0, 1.0), param(p, 1, 1.0));
    throw ParseError("unknown auxiliary function registry id '" + id + "'");
}

std::string to_string(GlobalTheorem t) {
    switch (t) {
    case GlobalTheorem::PME_A: return "pme-a";
    case GlobalTheorem::PME_B: return "pme-b";
    case GlobalTheorem::FDE_A: return "fde-a";
    case GlobalTheorem::FDE_B: return "fde-b";
    }
    return "unknown";
}

GlobalTheorem global_theorem_from_string(const std::string& s) {
    std::string low;
    for (char c : s) low += c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "pme-a") return GlobalTheorem::PME_A;
    if (low == "pme-b") return GlobalTheorem::PME_B;
    if (low == "fde-a") return GlobalTheorem::FDE_A;
    if (low == "fde-b") return GlobalTheorem::FDE_B;
    throw ParseError("unknown gradient-bound theorem '" + s + "'");
}

namespace {

// Tracks sup of an expression required to be <= 0.
struct Condition {
    std::string name;
    double worst = -std::numeric_limits<double>::infinity();
    double scale = 0;

    void see(double value, double magnitude) {
        worst = std::max(worst, value);
        scale = std::max(scale, magnitude);
    }
    Hypothesis result() const {
        const double w = std::isfinite(worst) ? worst : 0.0;
        return {name, w <= 1e-12 * (1.0 + scale), w, "sup of expression must be <= 0"};
    }
};

} // namespace

GradientBoundReport global_gradient_bound_check(const SolutionHistory& history, const PMEConfig& cfg,
                                                const NonlinearitySpec& N, GlobalTheorem theorem,
                                                std::optional<AuxFunction> aux, double a) {
    const SpacePtr& space = history.space;
    if (!space->periodic()) throw PreconditionError("global gradient bounds need a closed manifold (circle)");
    const bool pme_thm = theorem == GlobalTheorem::PME_A || theorem == GlobalTheorem::PME_B;
    if (pme_thm != (cfg.mode == DiffusionMode::PME)) {
        throw PreconditionError("theorem " + to_string(theorem) + " does not match diffusion mode " +
                                to_string(cfg.mode));
    }
    check_theorem_range(cfg, true);
    const bool variant_a = theorem == GlobalTheorem::PME_A || theorem == GlobalTheorem::FDE_A;
    const AuxFunction G = aux.value_or(AuxFunction::zero());
    const double p = cfg.p;

    GradientBoundReport out;
    out.theorem = to_string(theorem);
    out.inequality = InequalityReport(out.theorem, 0.0);
    out.a = a;
    out.sup_convention = "sup over M x [0,T]";

    std::vector<std::size_t> all(space->size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    out.inequality.add_hypothesis(ricci_hypothesis(space, cfg, all));

    const auto slices = pressure_slices(history, cfg);
    double M = 0, vmin = std::numeric_limits<double>::infinity();
    for (const auto& s : slices) {
        for (double v : s.v) M = std::max(M, v), vmin = std::min(vmin, v);
    }
    const double K = (p - 1.0) * (cfg.m - 1.0) * cfg.k;
    out.sup_v = M;
    out.curvature_const = K;

    // Hypotheses on the realized trajectory.
    Condition c_sigma{variant_a && !pme_thm ? "sigma_star_le_a" : (pme_thm ? "sigma_le_0" : "sigma_star_le_0")};
    Condition c_aux_sigma{"aux_derivative_times_sigma_le_0"};
    Condition c_sx{"grad_v_dot_sigma_x_le_0"};
    Condition c_sv{pme_thm ? (variant_a ? "sigma_v_combination_le_a" : "sigma_v_combination_le_0")
                           : "sigma_star_v_le_0"};
    for (const auto& s : slices) {
        for (std::size_t i = 0; i < space->size(); ++i) {
            const double x = space->nodes()[i], v = s.v[i];
            const double sg = sigma(s.t, x, v, cfg, N);
            const auto [sv, sx] = sigma_partials(s.t, x, v, cfg, N);
            const double gx = s.grad[i] * sx;
            c_sx.see(gx, std::abs(gx));
            if (pme_thm) {
                const double comb = sv + sg / (2.0 * (p - 1.0) * v);
                if (variant_a) {
                    c_aux_sigma.see(G.d1(v) * sg, std::abs(G.d1(v) * sg));
                    c_sv.see(comb - a, std::abs(comb) + std::abs(a));
                } else {
                    c_sigma.see(sg, std::abs(sg));
                    c_sv.see(comb, std::abs(comb));
                }
            } else if (variant_a) {
                c_sigma.see(sg - a, std::abs(sg) + std::abs(a));
                c_aux_sigma.see(G.d1(v) * sg, std::abs(G.d1(v) * sg));
            } else {
                c_sigma.see(sg, std::abs(sg));
                c_sv.see(sv, std::abs(sv));
            }
        }
    }
    if (variant_a) {
        Condition c_conv{"aux_convexity_ge_0"};
        for (int j = 0; j <= 200; ++j) {
            const double v = vmin + (M - vmin) * j / 200.0;
            const double e = G.d1(v) + v * G.d2(v);
            c_conv.see(-e, std::abs(G.d1(v)) + std::abs(v * G.d2(v)));
        }
        if (pme_thm) {
            out.inequality.add_hypothesis(c_aux_sigma.result());
            out.inequality.add_hypothesis(c_conv.result());
            out.inequality.add_hypothesis(c_sx.result());
            out.inequality.add_hypothesis(c_sv.result());
        } else {
            out.inequality.add_hypothesis(c_sigma.result());
            out.inequality.add_hypothesis(c_aux_sigma.result());
            out.inequality.add_hypothesis(c_conv.result());
            out.inequality.add_hypothesis(c_sx.result());
        }
        out.inequality.note("aux", G.id);
        out.inequality.note("a", a);
    } else {
        out.inequality.add_hypothesis(c_sigma.result());
        if (!pme_thm) out.inequality.add_hypothesis(c_sv.result());
        out.inequality.add_hypothesis(c_sx.result());
        if (pme_thm) out.inequality.add_hypothesis(c_sv.result());
    }

    // Conclusion.
    double t_limit = std::numeric_limits<double>::infinity();
    if (K < 0 && M > 0) {
        t_limit = 1.0 / (2.0 * M * std::abs(K));
        out.inequality.warn("K < 0: checks restricted to t < 1/(2 M |K|) = " + format_number(t_limit));
    }
    const PressureSlice& s0 = slices.front();
    auto grad_term = [&](double v, double g) { return pme_thm ? std::pow(v, 1.0 / (p - 1.0)) * g * g : g * g; };
    const double expo = pme_thm ? p / (p - 1.0) : 2.0 * p / (2.0 * p - 1.0);
    double max0 = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < space->size(); ++i) {
        const double v = s0.v[i];
        const double val = variant_a ? grad_term(v, s0.grad[i]) + G.g(v) : std::pow(v, expo);
        max0 = std::max(max0, val);
    }
    double scale = std::abs(max0);
    for (const auto& s : slices) {
        if (!(s.t > 0) || !(s.t < t_limit)) continue;
        const double t = s.t;
        for (std::size_t i = 0; i < space->size(); ++i) {
            const double v = s.v[i];
            const double gt = grad_term(v, s.grad[i]);
            double lhs = 0, rhs = 0;
            switch (theorem) {
            case GlobalTheorem::PME_A:
            case GlobalTheorem::FDE_A:
                lhs = gt;
                rhs = std::exp(2.0 * (M * K + a) * t) * (max0 - G.g(v));
                break;
            case GlobalTheorem::PME_B:
                lhs = p * p * t / (1.0 + 2.0 * M * K * t) * gt;
                rhs = (p - 1.0) * (max0 - std::pow(v, expo));
                break;
            case GlobalTheorem::FDE_B:
                lhs = t * gt / (1.0 + 2.0 * M * K * t);
                rhs = (2.0 * p - 1.0) * (2.0 * p - 1.0) / (8.0 * p * p * p) * (max0 - std::pow(v, expo));
                break;
            }
            scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
            out.inequality.add("point", space->nodes()[i], t, lhs, rhs);
        }
    }
    const double h = space->h();
    const double dt = history.diagnostics.empty() ? 0.0 : history.diagnostics.front().dt;
    out.inequality.set_tol(10.0 * (h * h + dt) * scale);
    out.inequality.note("M", M);
    out.inequality.note("K", K);
    out.inequality.note("scale", scale);
    out.inequality.note("tolerance_rule", "10*(h^2+dt)*scale");
    out.inequality.note("sup_convention", out.sup_convention);
    out.inequality.finalize();
    return out;
}

} // namespace smms
