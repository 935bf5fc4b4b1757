#include "smms/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "smms/errors.hpp"
#include "smms/expr.hpp"
#include "smms/fields.hpp"
#include "smms/functionals.hpp"
#include "smms/isoperimetry.hpp"
#include "smms/nonlinear.hpp"
#include "smms/operators.hpp"
#include "smms/semigroup.hpp"
#include "smms/wasserstein.hpp"

namespace smms {

#ifndef SMMS_VERSION
#define SMMS_VERSION "0.0.0"
#endif

std::string artifact_version() { return SMMS_VERSION; }

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Task output

struct Plot {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct TaskOutput {
    InequalityReport main;
    std::vector<std::pair<std::string, DecayReport>> decays;
    std::vector<Plot> plots;
};

// Copies samples with their effective tolerance so reports with different
// tolerances can share one CSV.
void merge(InequalityReport& into, const InequalityReport& rep, const std::string& prefix) {
    for (Sample s : rep.samples()) {
        s.tol = rep.tolerance_of(s);
        s.probe = prefix + s.probe;
        into.add_sample(std::move(s));
    }
    for (const auto& w : rep.warnings()) into.warn(prefix + w);
    for (Hypothesis h : rep.hypotheses()) {
        h.name = prefix + h.name;
        into.add_hypothesis(std::move(h));
    }
    for (const auto& [k, v] : rep.metadata()) into.note(prefix + k, v);
}

std::string prefix_for(const std::string& label, std::size_t count) {
    return count > 1 ? label + "/" : std::string();
}

// ---------------------------------------------------------------------------
// Shared key groups

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

struct SpaceKeys {
    DomainKind kind = TruncatedLine{8.0};
    std::string weight_id = "zero";
    std::vector<double> weight_params;
    std::size_t nodes = 256;
    bool normalize = true;

    SpacePtr build(std::size_t n = 0) const {
        return build_space(kind, WeightSpec::from_registry(weight_id, weight_params), n ? n : nodes, normalize);
    }
    bool flat_circle() const { return std::holds_alternative<Circle>(kind) && weight_id == "zero"; }
};

SpaceKeys read_space(const ScenarioSpec& s) {
    SpaceKeys k;
    const std::string domain = lower(s.str("domain", "truncated_line"));
    if (domain == "circle") {
        k.kind = Circle{s.num("period", 2.0 * kPi)};
    } else if (domain == "interval") {
        const std::string bc = lower(s.str("boundary", "neumann"));
        if (bc != "neumann" && bc != "dirichlet") {
            throw ParseError("scenario '" + s.id() + "': boundary must be neumann or dirichlet");
        }
        k.kind = Interval{s.num("a", 0.0), s.num("b", 1.0), bc == "dirichlet" ? Boundary::Dirichlet : Boundary::Neumann};
    } else if (domain == "truncated_line") {
        k.kind = TruncatedLine{s.num("half_width", 8.0)};
    } else {
        throw ParseError("scenario '" + s.id() + "': unknown domain '" + domain + "'");
    }
    k.weight_id = s.str("weight", "zero");
    k.weight_params = s.numbers("weight_params");
    WeightSpec::from_registry(k.weight_id, k.weight_params);
    const long n = s.integer("nodes", 256);
    if (n < 16) throw PreconditionError("scenario '" + s.id() + "': nodes must be >= 16");
    k.nodes = static_cast<std::size_t>(n);
    k.normalize = s.flag("normalize", true);
    return k;
}

// Field descriptors: an expression in x, or random(seed[, modes, amplitude, base]).
struct FieldSpec {
    std::string text;
    bool random = false;
    std::vector<double> args;

    ScalarField build(const SpacePtr& space) const {
        if (random) {
            const auto arg = [&](std::size_t i, double d) { return i < args.size() ? args[i] : d; };
            return random_bandlimited(space, static_cast<std::uint64_t>(arg(0, 0)), static_cast<int>(arg(1, 4)),
                                      arg(2, 0.5), arg(3, 1.0));
        }
        const Expression e(text);
        return ScalarField::sample(space, [&](double x) { return e(x); });
    }
};

FieldSpec parse_field(const std::string& text) {
    FieldSpec f;
    f.text = text;
    const std::string t = lower(text);
    if (t.rfind("random(", 0) == 0) {
        if (t.back() != ')') throw ParseError("field '" + text + "': expected random(seed[, modes, amplitude, base])");
        f.random = true;
        std::string inner = t.substr(7, t.size() - 8);
        std::replace(inner.begin(), inner.end(), ',', ' ');
        std::istringstream is(inner);
        std::string tok;
        while (is >> tok) f.args.push_back(parse_number(tok, "field '" + text + "'"));
        if (f.args.empty() || f.args.size() > 4 || f.args[0] < 0 || std::floor(f.args[0]) != f.args[0]) {
            throw ParseError("field '" + text + "': expected random(seed[, modes, amplitude, base])");
        }
        return f;
    }
    Expression check(text);
    (void)check;
    return f;
}

// `key` as a ';'-separated list plus `random_fields` seeded band-limited fields.
std::vector<FieldSpec> read_fields(const ScenarioSpec& s, const std::string& key, const std::string& fallback) {
    std::vector<FieldSpec> out;
    for (const auto& item : s.items(key)) out.push_back(parse_field(item));
    const long count = s.integer("random_fields", 0);
    if (count < 0) throw ParseError("scenario '" + s.id() + "': random_fields must be >= 0");
    const long seed = s.integer("seed", 0);
    const long modes = s.integer("random_modes", 4);
    const double amp = s.num("random_amplitude", 0.5);
    const double base = s.num("random_base", 1.0);
    for (long j = 0; j < count; ++j) {
        FieldSpec f;
        f.random = true;
        f.args = {static_cast<double>(seed + j), static_cast<double>(modes), amp, base};
        f.text = "random(" + std::to_string(seed + j) + ")";
        out.push_back(std::move(f));
    }
    if (out.empty()) out.push_back(parse_field(fallback));
    return out;
}

Scheme read_scheme(const ScenarioSpec& s, Scheme fallback) {
    if (!s.has("scheme")) return fallback;
    const std::string v = lower(s.str("scheme"));
    if (v == "trapezoidal" || v == "crank_nicolson") return Scheme::Trapezoidal;
    if (v == "implicit_euler") return Scheme::ImplicitEuler;
    throw ParseError("scenario '" + s.id() + "': scheme must be trapezoidal or implicit_euler");
}

FlowConfig read_flow(const ScenarioSpec& s, double t_final = 1.0) {
    FlowConfig c;
    c.dt = s.num("dt", 1e-3);
    c.t_final = s.num("t_final", t_final);
    c.scheme = read_scheme(s, Scheme::Trapezoidal);
    c.record_every = static_cast<int>(s.integer("record_every", 1));
    c.sample_times = s.numbers("sample_times");
    c.validate();
    return c;
}

PMEConfig read_pme(const ScenarioSpec& s, DiffusionMode mode) {
    PMEConfig c;
    c.mode = mode;
    c.p = s.num("p", mode == DiffusionMode::PME ? 1.5 : 0.8);
    c.m = s.num("m", 2.0);
    c.k = s.num("k", 0.0);
    c.dt = s.num("dt", 1e-3);
    c.record_every = static_cast<int>(s.integer("record_every", 1));
    c.newton_tol = s.num("newton_tol", 1e-12);
    c.eps_pos = s.num("eps_pos", 1e-10);
    c.allow_endpoint = s.flag("allow_endpoint", false);
    c.validate();
    return c;
}

DiffusionMode read_mode(const ScenarioSpec& s, double p_hint) {
    if (!s.has("mode")) return p_hint < 1 ? DiffusionMode::FDE : DiffusionMode::PME;
    const std::string v = lower(s.str("mode"));
    if (v == "pme") return DiffusionMode::PME;
    if (v == "fde") return DiffusionMode::FDE;
    throw ParseError("scenario '" + s.id() + "': mode must be pme or fde");
}

NonlinearitySpec read_nonlinearity(const ScenarioSpec& s) {
    return NonlinearitySpec::from_registry(s.str("nonlinearity", "zero"), s.numbers("nonlinearity_params"));
}

// "a:b a:b ..." with inf / -inf endpoints.
IntervalUnion parse_union(const std::string& text, const std::string& where) {
    std::istringstream is(text);
    std::string tok;
    std::vector<std::pair<double, double>> parts;
    while (is >> tok) {
        const auto colon = tok.find(':', tok.front() == '-' ? 1 : 0);
        if (colon == std::string::npos) throw ParseError(where + ": interval '" + tok + "' must be written a:b");
        parts.emplace_back(parse_number(tok.substr(0, colon), where), parse_number(tok.substr(colon + 1), where));
    }
    if (parts.empty()) throw ParseError(where + ": empty set");
    for (const auto& [a, b] : parts) {
        if (!(a < b)) throw PreconditionError(where + ": interval endpoints must satisfy a < b");
    }
    return IntervalUnion(parts);
}

std::string describe_union(const IntervalUnion& A) {
    std::string out;
    for (const auto& [a, b] : A.intervals()) {
        out += (out.empty() ? "" : " ") + format_number(a) + ":" + format_number(b);
    }
    return out;
}

double unit_uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// 1-4 disjoint intervals with endpoints in [-3, 3]; the outer ends are
// sometimes pushed to infinity so half-line pieces are exercised too.
IntervalUnion random_union(std::mt19937_64& g) {
    const int count = 1 + static_cast<int>(g() % 4);
    std::vector<double> ends(2 * static_cast<std::size_t>(count));
    for (double& e : ends) e = -3.0 + 6.0 * unit_uniform(g);
    std::sort(ends.begin(), ends.end());
    if (g() % 8 == 0) ends.front() = -IntervalUnion::kInf;
    if (g() % 8 == 0) ends.back() = IntervalUnion::kInf;
    std::vector<std::pair<double, double>> parts;
    for (std::size_t j = 0; j + 1 < ends.size(); j += 2) {
        if (ends[j] < ends[j + 1]) parts.emplace_back(ends[j], ends[j + 1]);
    }
    if (parts.empty()) parts.emplace_back(-1.0, 1.0);
    return IntervalUnion(parts);
}

double order_of(double coarse, double fine, double ratio) { return std::log(coarse / fine) / std::log(ratio); }

// ---------------------------------------------------------------------------
// Tasks. Each reads every key it uses, calls reject_unused, then computes.

void task_cd_check(const ScenarioSpec& s, TaskOutput& out) {
    const SpaceKeys sk = read_space(s);
    const double k = s.num("k", 0.0);
    const double m = s.num("m", kInfiniteDimension);
    const long seed = s.integer("seed", 0);
    const long random_probes = s.integer("random_probes", 3);
    std::vector<FieldSpec> custom;
    for (const auto& item : s.items("probes")) {
        if (lower(item) != "standard") custom.push_back(parse_field(item));
    }
    s.reject_unused();

    const SpacePtr space = sk.build();
    const CDParams params = CDParams::make(k, m, space->weight());
    std::vector<Probe> probes;
    if (custom.empty() || s.items("probes").size() > custom.size()) {
        probes = standard_probes(space, static_cast<std::uint64_t>(seed), static_cast<int>(random_probes));
    }
    for (const auto& f : custom) probes.push_back({f.text, f.build(space)});
    out.main = cd_check(space, params, probes);
    const ScalarField ric = ricci_phi_m(space, params.m);
    out.plots.push_back({"ricci", {space->nodes().begin(), space->nodes().end()},
                         {ric.values().begin(), ric.values().end()}});
}

void task_heat_decay(const ScenarioSpec& s, TaskOutput& out) {
    const SpaceKeys sk = read_space(s);
    const std::string check = lower(s.str("check", "variance"));
    if (check != "variance" && check != "entropy" && check != "commutation") {
        throw ParseError("scenario '" + s.id() + "': check must be variance, entropy or commutation");
    }
    const std::vector<FieldSpec> fields = read_fields(s, "f", check == "entropy" ? "1 + 0.5*sin(x)" : "x");
    const double k = s.num("k", 1.0);
    const FlowConfig cfg = read_flow(s);
    const double rate_tol = s.num("rate_tol", kNotApplicable);
    if (!std::isnan(rate_tol) && check == "commutation") {
        throw ParseError("scenario '" + s.id() + "': rate_tol applies to variance and entropy checks only");
    }
    s.reject_unused();

    const SpacePtr space = sk.build();
    out.main = InequalityReport("heat_decay_" + check, 0.0);
    out.main.note("check", check);
    for (std::size_t j = 0; j < fields.size(); ++j) {
        const ScalarField f = fields[j].build(space);
        const std::string pre = prefix_for(fields[j].text, fields.size());
        if (check == "commutation") {
            merge(out.main, commutation_check(space, f, k, cfg), pre);
            continue;
        }
        DecayReport d = check == "variance" ? variance_decay_check(space, f, k, cfg)
                                            : entropy_decay_check(space, f, k, cfg);
        merge(out.main, d.inequality, pre);
        if (!std::isnan(rate_tol)) {
            for (std::size_t i = 0; i < d.times.size(); ++i) {
                const double rel = std::abs(d.observed_ratio[i] / d.theoretical_rate[i] - 1.0);
                out.main.add(pre + "rate_match", kNotApplicable, d.times[i], rel, rate_tol, 0.0);
            }
        }
        out.plots.push_back({"ratio_" + std::to_string(j), d.times, d.observed_ratio});
        out.decays.emplace_back("decay_" + std::to_string(j), std::move(d));
    }
}

void task_poincare(const ScenarioSpec& s, TaskOutput& out) {
    const SpaceKeys sk = read_space(s);
    const std::vector<FieldSpec> fields = read_fields(s, "f", "x");
    const double k = s.num("k", 1.0);
    const double eq_tol = s.num("equality_tol", kNotApplicable);
    s.reject_unused();

    const SpacePtr space = sk.build();
    out.main = InequalityReport("poincare", 0.0);
    for (const auto& fs : fields) {
        const ScalarField f = fs.build(space);
        const std::string pre = prefix_for(fs.text, fields.size());
        merge(out.main, poincare_check(space, f, k), pre);
        const double var = variance(f), en = energy(f);
        out.main.note(pre + "variance", var);
        out.main.note(pre + "energy", en);
        if (!std::isnan(eq_tol)) out.main.add(pre + "equality", kNotApplicable, kNotApplicable, std::abs(var - en / k), eq_tol, 0.0);
    }
}

void task_lsi(const ScenarioSpec& s, TaskOutput& out) {
    const SpaceKeys sk = read_space(s);
    const std::vector<FieldSpec> fields = read_fields(s, "f", "random(0)");
    const double k = s.num("k", 1.0);
    s.reject_unused();

    const SpacePtr space = sk.build();
    out.main = InequalityReport("lsi", 0.0);
    for (const auto& fs : fields) merge(out.main, lsi_check(space, fs.build(space), k), fs.text + "/");
}

void task_hypercontractivity(const ScenarioSpec& s, TaskOutput& out) {
    const SpaceKeys sk = read_space(s);
    const std::vector<FieldSpec> fields = read_fields(s, "f", "1 + 0.5*sin(x/2)");
    const std::vector<double> ps = s.numbers("p", {1.5});
    const FlowConfig cfg = read_flow(s);
    s.reject_unused();

    const SpacePtr space = sk.build();
    out.main = InequalityReport("hypercontractivity", 0.0);
    for (const auto& fs : fields) {
        const ScalarField f = fs.build(space);
        for (double p : ps) merge(out.main, hypercontractivity_check(space, f, p, cfg), fs.text + "/p=" + format_number(p) + "/");
    }
}

void task_wasserstein(const ScenarioSpec& s, TaskOutput& out) {
    const SpaceKeys sk = read_space(s);
    const std::string mode = lower(s.str("check", "contraction"));
    if (mode != "contraction" && mode != "distance") {
        throw ParseError("scenario '" + s.id() + "': check must be contraction or distance");
    }
    const FieldSpec f = parse_field(s.str("f"));
    const FieldSpec g = parse_field(s.str("g"));
    const double k = s.num("k", 1.0);
    FlowConfig cfg;
    double ratio_tol = kNotApplicable, expected = kNotApplicable, rel_tol = 0;
    if (mode == "contraction") {
        cfg = read_flow(s, 0.5);
        ratio_tol = s.num("ratio_tol", kNotApplicable);
    } else {
        expected = s.num("expected");
        rel_tol = s.num("rel_tol", 0.01);
        if (!(expected > 0)) throw PreconditionError("scenario '" + s.id() + "': expected must be > 0");
    }
    s.reject_unused();

    const SpacePtr space = sk.build();
    const ScalarField ff = f.build(space), gg = g.build(space);
    if (mode == "distance") {
        const double w = wasserstein2_1d(ff, gg);
        out.main = InequalityReport("wasserstein_distance", 0.0);
        out.main.note("w2", w);
        out.main.note("expected", expected);
        out.main.add("relative_error", kNotApplicable, kNotApplicable, std::abs(w - expected) / expected, rel_tol);
        return;
    }
    const InequalityReport rep = wasserstein_contraction_check(space, ff, gg, k, cfg);
    out.main = InequalityReport("wasserstein", 0.0);
    merge(out.main, rep, "");
    const double w0 = wasserstein2_1d(ff, gg);
    std::vector<double> ts, ratios;
    for (const auto& smp : rep.samples()) {
        const double ratio = w0 > 0 ? smp.lhs / w0 : 0.0;
        ts.push_back(smp.t);
        ratios.push_back(ratio);
        if (!std::isnan(ratio_tol)) {
            out.main.add("ratio", kNotApplicable, smp.t, ratio, std::exp(-k * smp.t) * (1.0 + ratio_tol), 0.0);
        }
    }
    out.plots.push_back({"ratio", ts, ratios});
}

struct SolveKeys {
    SpaceKeys space;
    PMEConfig cfg;
    NonlinearitySpec N = NonlinearitySpec::zero();
    FieldSpec u0;
    double t_final = 1.0;
};

SolveKeys read_solve(const ScenarioSpec& s, DiffusionMode mode) {
    SolveKeys k;
    k.space = read_space(s);
    k.cfg = read_pme(s, mode);
    k.N = read_nonlinearity(s);
    k.u0 = parse_field(s.str("u0", "2 + cos(x)"));
    k.t_final = s.num("t_final", 1.0);
    if (!(k.t_final > 0)) throw PreconditionError("scenario '" + s.id() + "': t_final must be > 0");
    return k;
}

SolutionHistory run_solve(const SolveKeys& k, std::size_t nodes = 0) {
    const SpacePtr space = k.space.build(nodes);
    return solve_diffusion(space, k.u0.build(space), k.cfg, k.N, k.t_final);
}

void note_solver(InequalityReport& rep, const SolutionHistory& h) {
    int newton = 0, halvings = 0;
    for (const auto& d : h.diagnostics) {
        newton += d.newton_iterations;
        halvings = std::max(halvings, d.halvings);
    }
    rep.note("steps", static_cast<double>(h.diagnostics.size()));
    rep.note("newton_iterations", static_cast<double>(newton));
    rep.note("max_halvings", static_cast<double>(halvings));
}

Plot field_plot(const std::string& name, const ScalarField& f) {
    const auto x = f.space()->nodes();
    return {name, {x.begin(), x.end()}, {f.values().begin(), f.values().end()}};
}

void task_solve(const ScenarioSpec& s, TaskOutput& out, DiffusionMode mode) {
    const SolveKeys k = read_solve(s, mode);
    std::optional<Expression> exact;
    if (s.has("exact")) exact.emplace(s.str("exact"), std::initializer_list<std::string>{"x", "t"});
    const double error_tol = s.num("error_tol", 1e-10);
    const double mass_tol = s.num("mass_tol", 1e-9);
    s.reject_unused();

    const SolutionHistory h = run_solve(k);
    out.main = InequalityReport(mode == DiffusionMode::PME ? "solve_pme" : "solve_fde", 0.0);
    out.main.note("p", k.cfg.p);
    out.main.note("m", k.cfg.m);
    out.main.note("nonlinearity", k.N.id());
    note_solver(out.main, h);
    const ScalarField& uT = h.final();
    const double T = h.times.back();
    if (k.N.is_zero()) {
        const double drift = std::abs(integrate(uT) - integrate(h.initial()));
        out.main.add("mass_drift_per_time", kNotApplicable, T, drift / T, mass_tol, 0.0);
    }
    if (exact) {
        double err = 0;
        for (std::size_t i = 0; i < uT.size(); ++i) {
            err = std::max(err, std::abs(uT[i] - exact->eval({{"x", uT.space()->nodes()[i]}, {"t", T}})));
        }
        out.main.add("linf_error", kNotApplicable, T, err, error_tol, 0.0);
    }
    out.main.add("min_u", kNotApplicable, T, k.cfg.eps_pos, uT.min(), 0.0);
    out.plots.push_back(field_plot("u_initial", h.initial()));
    out.plots.push_back(field_plot("u_final", uT));
}

void note_gradient(InequalityReport& rep, const GradientBoundReport& g) {
    rep.note("theorem", g.theorem);
    rep.note("sup_v", g.sup_v);
    rep.note("curvature_const", g.curvature_const);
    rep.note("a", g.a);
    rep.note("sup_convention", g.sup_convention);
    if (!std::isnan(g.empirical_constant)) rep.note("empirical_constant", g.empirical_constant);
}

Plot worst_margin_by_time(const InequalityReport& rep) {
    std::map<double, double> worst;
    for (const auto& smp : rep.samples()) {
        if (std::isnan(smp.t)) continue;
        auto [it, fresh] = worst.emplace(smp.t, smp.margin);
        if (!fresh) it->second = std::min(it->second, smp.margin);
    }
    Plot p{"worst_margin", {}, {}};
    for (const auto& [t, m] : worst) {
        p.x.push_back(t);
        p.y.push_back(m);
    }
    return p;
}

void task_gradient_bound(const ScenarioSpec& s, TaskOutput& out) {
    const std::string theorem = lower(s.str("theorem", "pme-b"));
    if (theorem == "pme-liouville" || theorem == "fde-liouville") {
        const double p = s.num("p", theorem == "pme-liouville" ? 1.2 : 0.8);
        const NonlinearitySpec N = read_nonlinearity(s);
        const std::pair<double, double> range{s.num("u_min", 0.1), s.num("u_max", 10.0)};
        const long samples = s.integer("samples", 200);
        s.reject_unused();
        out.main = theorem == "pme-liouville" ? liouville_hypothesis_pme(N, p, range, static_cast<int>(samples))
                                              : liouville_hypothesis_fde(N, p, range, static_cast<int>(samples));
        return;
    }
    const GlobalTheorem th = global_theorem_from_string(theorem);
    const bool pme = th == GlobalTheorem::PME_A || th == GlobalTheorem::PME_B;
    const bool variant_a = th == GlobalTheorem::PME_A || th == GlobalTheorem::FDE_A;
    const SolveKeys k = read_solve(s, pme ? DiffusionMode::PME : DiffusionMode::FDE);
    std::optional<AuxFunction> aux;
    double a = 0;
    if (variant_a) {
        aux = AuxFunction::from_registry(s.str("aux", "neg_log"), s.numbers("aux_params"));
        a = s.num("a", 0.0);
    }
    s.reject_unused();

    const SolutionHistory h = run_solve(k);
    const GradientBoundReport g = global_gradient_bound_check(h, k.cfg, k.N, th, aux, a);
    out.main = g.inequality;
    note_gradient(out.main, g);
    note_solver(out.main, h);
    out.plots.push_back(worst_margin_by_time(g.inequality));
}

void task_local_estimate(const ScenarioSpec& s, TaskOutput& out) {
    const double p_hint = s.has("p") ? s.num("p") : 1.5;
    const SolveKeys k = read_solve(s, read_mode(s, p_hint));
    const double R = s.num("r", kPi / 2.0);
    const double T = s.num("t_window", 0.5);
    const double center = s.num("center", 0.0);
    const bool refine = s.flag("refine", true);
    const double refine_tol = s.num("refine_tol", 0.05);
    s.reject_unused();

    const GradientBoundReport g = local_gradient_estimate_report(run_solve(k), k.cfg, k.N, R, T, center);
    out.main = g.inequality;
    note_gradient(out.main, g);
    const double c = g.empirical_constant;
    out.main.add("empirical_constant_finite", kNotApplicable, kNotApplicable, 0.0, std::isfinite(c) ? 0.0 : -1.0, 0.0);
    if (refine) {
        const GradientBoundReport g2 =
            local_gradient_estimate_report(run_solve(k, 2 * k.space.nodes), k.cfg, k.N, R, T, center);
        const double c2 = g2.empirical_constant;
        out.main.note("empirical_constant_refined", c2);
        const double change = std::abs(c2 - c) / std::max(std::abs(c), 1e-300);
        out.main.add("refinement_change", kNotApplicable, kNotApplicable, change, refine_tol, 0.0);
    }
    out.plots.push_back(worst_margin_by_time(g.inequality));
}

void task_iso_check(const ScenarioSpec& s, TaskOutput& out) {
    const std::string kind = lower(s.str("check", "gaussian"));
    if (kind != "gaussian" && kind != "cd" && kind != "minkowski") {
        throw ParseError("scenario '" + s.id() + "': check must be gaussian, cd or minkowski");
    }
    std::vector<IntervalUnion> sets;
    for (const auto& item : s.items("set")) sets.push_back(parse_union(item, "scenario '" + s.id() + "' key 'set'"));
    const std::size_t explicit_sets = sets.size();
    const long random_sets = s.integer("random_sets", 0);
    std::mt19937_64 gen(static_cast<std::uint64_t>(s.integer("seed", 0)));
    for (long j = 0; j < random_sets; ++j) sets.push_back(random_union(gen));
    if (sets.empty()) throw ParseError("scenario '" + s.id() + "': iso-check needs 'set' or 'random_sets'");
    const double eq_tol = s.num("equality_tol", kNotApplicable);
    std::optional<SpaceKeys> sk;
    double k = 1.0, mink_tol = 0;
    if (kind != "gaussian") sk = read_space(s);
    if (kind == "cd") k = s.num("k", 1.0);
    if (kind == "minkowski") mink_tol = s.num("minkowski_tol", 1e-6);
    s.reject_unused();

    out.main = InequalityReport("iso_" + kind, 0.0);
    const SpacePtr space = sk ? sk->build() : nullptr;
    for (std::size_t j = 0; j < sets.size(); ++j) {
        const IntervalUnion& A = sets[j];
        const std::string label = (j < explicit_sets ? "set" : "random") + std::to_string(j) + "/";
        if (kind == "minkowski") {
            const double an = minkowski_content_1d(*space, A, MinkowskiMode::Analytic);
            const double sw = minkowski_content_1d(*space, A, MinkowskiMode::EpsilonSweep);
            out.main.add(label + describe_union(A), kNotApplicable, kNotApplicable, std::abs(an - sw),
                         mink_tol * std::max(1.0, std::abs(an)), 0.0);
            continue;
        }
        const InequalityReport rep = kind == "gaussian" ? gaussian_iso_check(A) : cd_iso_check(space, k, A);
        merge(out.main, rep, label);
        if (!std::isnan(eq_tol) && j < explicit_sets) {
            const Sample* w = rep.worst();
            if (w) out.main.add(label + "equality", kNotApplicable, kNotApplicable, std::abs(w->margin), eq_tol, 0.0);
        }
    }
}

void task_profile(const ScenarioSpec& s, TaskOutput& out) {
    const std::string model = lower(s.str("model", "gauss"));
    const long n = s.integer("n", model == "gauss" ? 1 : 2);
    const long count = s.integer("count", 199);
    const double v_max = s.num("v_max", 1.0);
    const double tol = s.num("tol", 1e-10);
    const std::vector<double> radii = s.numbers("radii", {0.5, 1.0, 2.0});
    const std::vector<double> angles = s.numbers("angles", {kPi / 6, kPi / 3, kPi / 2, 2 * kPi / 3});
    std::vector<std::pair<double, double>> values;
    for (const auto& item : s.items("values")) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError("scenario '" + s.id() + "': values entries are v:I");
        values.emplace_back(parse_number(item.substr(0, colon), "values"), parse_number(item.substr(colon + 1), "values"));
    }
    const double value_tol = s.num("value_tol", 1e-6);
    s.reject_unused();

    ModelSpace ms = model == "gauss"       ? ModelSpace::gauss(static_cast<int>(n))
                    : model == "sphere"    ? ModelSpace::sphere(static_cast<int>(n))
                    : model == "euclidean" ? ModelSpace::euclidean(static_cast<int>(n))
                                           : throw ParseError("scenario '" + s.id() + "': unknown model '" + model + "'");
    const ProfileCurve curve = sample_profile(ms, static_cast<int>(count), model == "euclidean" ? v_max : 1.0);
    out.main = InequalityReport("profile_" + model, 0.0);
    out.main.note("n", static_cast<double>(n));
    out.plots.push_back({"profile", curve.v, curve.I});
    if (model != "euclidean") {
        for (std::size_t i = 0; i < curve.v.size(); ++i) {
            const double v = curve.v[i];
            out.main.add("symmetry", v, kNotApplicable, std::abs(ms.profile(v) - ms.profile(1.0 - v)), tol, 0.0);
        }
    }
    if (model == "gauss") {
        for (std::size_t i = 1; i + 1 < curve.v.size(); ++i) {
            const double d2 = curve.I[i - 1] - 2 * curve.I[i] + curve.I[i + 1];
            out.main.add("concavity", curve.v[i], kNotApplicable, d2, 1e-8, 0.0);
        }
    } else if (model == "euclidean") {
        const double w = unit_ball_volume(static_cast<int>(n));
        for (double r : radii) {
            const double vol = w * std::pow(r, static_cast<double>(n));
            const double per = static_cast<double>(n) * w * std::pow(r, static_cast<double>(n - 1));
            out.main.add("ball_r=" + format_number(r), vol, kNotApplicable, std::abs(ms.profile(vol) - per),
                         tol * std::max(1.0, per), 0.0);
        }
    } else {
        const int nn = static_cast<int>(n);
        const double z = sin_power_integral(nn - 1, kPi);
        for (double th : angles) {
            const double v = sin_power_integral(nn - 1, th) / z;
            const double per = std::pow(std::sin(th), nn - 1) / z;
            out.main.add("cap_theta=" + format_number(th), v, kNotApplicable, std::abs(ms.profile(v) - per), tol, 0.0);
        }
    }
    for (const auto& [v, I] : values) {
        out.main.add("value", v, kNotApplicable, std::abs(ms.profile(v) - I), value_tol, 0.0);
    }
}

void task_brunn_minkowski(const ScenarioSpec& s, TaskOutput& out) {
    const std::string kind = lower(s.str("kind", "boxes"));
    const double eq_tol = s.num("equality_tol", kNotApplicable);
    InequalityReport rep;
    if (kind == "boxes") {
        const Box A{s.numbers("a_sides")}, B{s.numbers("b_sides")};
        s.reject_unused();
        rep = brunn_minkowski_check(A, B);
    } else if (kind == "intervals") {
        const IntervalUnion A = parse_union(s.str("a_set"), "scenario '" + s.id() + "' key 'a_set'");
        const IntervalUnion B = parse_union(s.str("b_set"), "scenario '" + s.id() + "' key 'b_set'");
        s.reject_unused();
        rep = brunn_minkowski_check(A, B);
    } else {
        throw ParseError("scenario '" + s.id() + "': kind must be boxes or intervals");
    }
    out.main = InequalityReport("brunn_minkowski", 0.0);
    merge(out.main, rep, "");
    if (!std::isnan(eq_tol)) {
        if (const Sample* w = rep.worst()) {
            out.main.add("equality", kNotApplicable, kNotApplicable, std::abs(w->margin), eq_tol, 0.0);
        }
    }
}

void task_jacobi_eigen(const ScenarioSpec& s, TaskOutput& out) {
    const double alpha = s.num("alpha", 0.0), beta = s.num("beta", 0.0);
    const long degree = s.integer("degree", 2);
    const long nodes = s.integer("nodes", 400);
    const double delta = s.num("delta", 0.05);
    const double expected = s.num("expected_eigenvalue", kNotApplicable);
    const double eigen_tol = s.num("eigen_tol", 1e-3);
    s.reject_unused();
    if (degree < 0) throw PreconditionError("scenario '" + s.id() + "': degree must be >= 0");
    if (nodes < 16) throw PreconditionError("scenario '" + s.id() + "': nodes must be >= 16");

    out.main = jacobi_eigencheck(alpha, beta, static_cast<int>(degree), static_cast<std::size_t>(nodes), delta);
    if (!std::isnan(expected)) {
        const double got = std::stod(out.main.metadata_value("eigenvalue_fine"));
        out.main.add("expected_eigenvalue", kNotApplicable, kNotApplicable, std::abs(got - expected),
                     eigen_tol * std::max(1.0, std::abs(expected)), 0.0);
    }
}

double mms_error(const SpacePtr& space, double p, double dt, double t_final) {
    PMEConfig cfg;
    cfg.p = p;
    cfg.dt = dt;
    cfg.record_every = std::numeric_limits<int>::max();
    cfg.validate();
    const ScalarField u0 =
        ScalarField::sample(space, [](double x) { return NonlinearitySpec::manufactured_solution(0.0, x); });
    const SolutionHistory h = solve_diffusion(space, u0, cfg, NonlinearitySpec::manufactured(p), t_final);
    const double T = h.times.back();
    double err = 0;
    for (std::size_t i = 0; i < space->size(); ++i) {
        err = std::max(err, std::abs(h.final()[i] - NonlinearitySpec::manufactured_solution(T, space->nodes()[i])));
    }
    return err;
}

void task_convergence_study(const ScenarioSpec& s, TaskOutput& out) {
    const std::string study = lower(s.str("study", "gamma-identity"));
    const SpaceKeys sk = read_space(s);
    out.main = InequalityReport("convergence_" + study, 0.0);

    if (study == "lp-derivative") {
        const std::vector<FieldSpec> fields = read_fields(s, "f", "random(0)");
        const std::vector<double> ps = s.numbers("p", {1.5, 2.0, 3.0});
        const double step = s.num("fd_step", 1e-4);
        const double rel_tol = s.num("rel_tol", 1e-5);
        s.reject_unused();
        const SpacePtr space = sk.build();
        for (const auto& fs : fields) {
            const ScalarField f = fs.build(space);
            for (double p : ps) {
                const double an = lp_norm_derivative(f, p);
                const double alt = lp_norm_derivative_normalized_form(f, p);
                const double fd = (lp_norm(f, p + step) - lp_norm(f, p - step)) / (2.0 * step);
                const double scale = std::max(std::abs(an), 1e-300);
                const std::string label = fs.text + "/p=" + format_number(p) + "/";
                out.main.add(label + "finite_difference", p, kNotApplicable, std::abs(an - fd) / scale, rel_tol, 0.0);
                out.main.add(label + "normalized_form", p, kNotApplicable, std::abs(an - alt) / scale, rel_tol, 0.0);
            }
        }
        return;
    }

    const long levels = s.integer("levels", 4);
    const double min_order = s.num("min_order", 1.8);
    if (levels < 2) throw PreconditionError("scenario '" + s.id() + "': levels must be >= 2");
    std::vector<double> hs, errs;

    if (study == "gamma-identity" || study == "bochner" || study == "gamma2-bochner") {
        const FieldSpec f = parse_field(s.str("f", "sin(x)"));
        s.reject_unused();
        for (long j = 0; j < levels; ++j) {
            const SpacePtr space = sk.build(sk.nodes << j);
            const ScalarField u = f.build(space);
            hs.push_back(space->h());
            errs.push_back(study == "gamma-identity" ? gamma_identity_residual(u)
                           : study == "bochner"      ? bochner_residual(u)
                                                     : gamma2_bochner_residual(u));
        }
    } else if (study == "mms-space" || study == "mms-time") {
        const double p = s.num("p", 1.5);
        const double dt = s.num("dt", study == "mms-space" ? 1e-5 : 4e-2);
        const double t_final = s.num("t_final", 0.5);
        s.reject_unused();
        if (!sk.flat_circle()) {
            throw PreconditionError("scenario '" + s.id() + "': manufactured solution needs the flat circle");
        }
        for (long j = 0; j < levels; ++j) {
            if (study == "mms-space") {
                const SpacePtr space = sk.build(sk.nodes << j);
                hs.push_back(space->h());
                errs.push_back(mms_error(space, p, dt, t_final));
            } else {
                const double dtj = dt / static_cast<double>(1L << j);
                hs.push_back(dtj);
                errs.push_back(mms_error(sk.build(), p, dtj, t_final));
            }
        }
    } else {
        throw ParseError("scenario '" + s.id() + "': unknown study '" + study + "'");
    }

    for (std::size_t j = 0; j < hs.size(); ++j) out.main.note("error_" + std::to_string(j), errs[j]);
    for (std::size_t j = 1; j < hs.size(); ++j) {
        const double order = order_of(errs[j - 1], errs[j], hs[j - 1] / hs[j]);
        out.main.add("order_" + std::to_string(j), hs[j], kNotApplicable, min_order, order, 0.0);
    }
    out.plots.push_back({"convergence", hs, errs});
}

using TaskFn = std::function<void(const ScenarioSpec&, TaskOutput&)>;

const std::map<std::string, TaskFn>& tasks() {
    static const std::map<std::string, TaskFn> table = {
        {"cd-check", task_cd_check},
        {"heat-decay", task_heat_decay},
        {"poincare", task_poincare},
        {"lsi", task_lsi},
        {"hypercontractivity", task_hypercontractivity},
        {"wasserstein", task_wasserstein},
        {"solve-pme", [](const ScenarioSpec& s, TaskOutput& o) { task_solve(s, o, DiffusionMode::PME); }},
        {"solve-fde", [](const ScenarioSpec& s, TaskOutput& o) { task_solve(s, o, DiffusionMode::FDE); }},
        {"gradient-bound", task_gradient_bound},
        {"local-estimate", task_local_estimate},
        {"iso-check", task_iso_check},
        {"profile", task_profile},
        {"brunn-minkowski", task_brunn_minkowski},
        {"jacobi-eigen", task_jacobi_eigen},
        {"convergence-study", task_convergence_study},
    };
    return table;
}

// ---------------------------------------------------------------------------
// Files

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

void write_notes(const InequalityReport& rep, std::ostream& os) {
    os << "kind,key,value\n";
    for (const auto& [k, v] : rep.metadata()) os << "note," << csv_field(k) << ',' << csv_field(v) << '\n';
    for (const auto& h : rep.hypotheses()) {
        os << "hypothesis," << csv_field(h.name) << ','
           << csv_field(std::string(h.holds ? "holds" : "violated") + " witness=" + format_number(h.witness) +
                        (h.detail.empty() ? "" : " " + h.detail))
           << '\n';
    }
    for (const auto& w : rep.warnings()) os << "warning,," << csv_field(w) << '\n';
}

class FileSink {
public:
    FileSink(const std::filesystem::path& root, const std::filesystem::path& dir) : root_(root), dir_(root / dir) {
        std::filesystem::create_directories(dir_);
    }

    template <class Fn>
    void write(const std::string& name, Fn&& fn) {
        const auto path = dir_ / name;
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw SolverError("cannot write '" + path.string() + "'");
        fn(os);
        files.push_back(std::filesystem::relative(path, root_).generic_string());
    }

    std::vector<std::string> files;

private:
    std::filesystem::path root_;
    std::filesystem::path dir_;
};

std::filesystem::path output_dir_of(const ScenarioSpec& spec) {
    const auto it = spec.values().find("output");
    const std::filesystem::path p = it == spec.values().end() ? spec.id() : it->second;
    if (p.empty() || p.is_absolute()) {
        throw ParseError("scenario '" + spec.id() + "': output must be a relative directory");
    }
    for (const auto& part : p) {
        if (part == "..") throw ParseError("scenario '" + spec.id() + "': output may not contain '..'");
    }
    return p.lexically_normal();
}

std::string verdict_string(const TaskOutput& out) {
    bool fail = false, unmet = false;
    auto visit = [&](const InequalityReport& r) {
        fail = fail || r.verdict() == Verdict::Fail;
        unmet = unmet || r.verdict() == Verdict::HypothesesUnmet;
    };
    visit(out.main);
    for (const auto& [name, d] : out.decays) visit(d.inequality);
    if (unmet) return to_string(Verdict::HypothesesUnmet);
    return fail ? to_string(Verdict::Fail) : to_string(Verdict::Pass);
}

std::string flatten(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
        if (c == '"') c = '\'';
    }
    return s;
}

} // namespace

const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : tasks()) n.push_back(k);
        return n;
    }();
    return names;
}

std::filesystem::path output_root(const std::filesystem::path& fallback) {
    const char* env = std::getenv("SMMS_OUTPUT_ROOT");
    return env && *env ? std::filesystem::path(env) : fallback;
}

RunRecord run_scenario(const ScenarioSpec& spec, const std::filesystem::path& root) {
    RunRecord rec;
    rec.scenario_id = spec.id();
    rec.version = artifact_version();
    rec.start = iso_now();
    rec.task = spec.has("task") ? spec.values().at("task") : "";
    rec.expected = "pass";
    try {
        const std::string task = lower(spec.str("task"));
        rec.task = task;
        const auto it = tasks().find(task);
        if (it == tasks().end()) throw ParseError("scenario '" + spec.id() + "': unknown task '" + task + "'");
        rec.expected = lower(spec.str("expect", "pass"));
        if (rec.expected != "pass" && rec.expected != "fail" && rec.expected != "hypotheses_unmet") {
            throw ParseError("scenario '" + spec.id() + "': expect must be pass, fail or hypotheses_unmet");
        }
        spec.str("output", "");
        spec.str("description", "");
        const std::filesystem::path dir = output_dir_of(spec);

        TaskOutput out;
        it->second(spec, out);
        out.main.finalize();
        for (auto& [name, d] : out.decays) d.inequality.finalize();

        FileSink sink(root, dir);
        std::string stem = out.main.name().empty() ? "report" : out.main.name();
        std::replace(stem.begin(), stem.end(), '-', '_');
        sink.write(stem + ".csv", [&](std::ostream& os) { write_csv(out.main, os); });
        sink.write("notes.csv", [&](std::ostream& os) { write_notes(out.main, os); });
        for (const auto& [name, d] : out.decays) {
            sink.write(name + ".csv", [&](std::ostream& os) { write_decay_csv(d, os); });
        }
        for (const auto& p : out.plots) {
            sink.write(p.name + ".dat", [&](std::ostream& os) { write_plot_data(p.x, p.y, os); });
        }
        rec.files = sink.files;
        rec.verdict = verdict_string(out);
        rec.worst_margin = out.main.worst_margin();
        for (const auto& [name, d] : out.decays) rec.worst_margin = std::min(rec.worst_margin, d.inequality.worst_margin());
        if (std::isinf(rec.worst_margin)) rec.worst_margin = kNotApplicable;
        rec.status = rec.verdict == rec.expected ? kStatusPass : kStatusInequality;
        if (rec.status != kStatusPass) {
            const Sample* w = out.main.worst();
            rec.reason = "verdict " + rec.verdict + ", expected " + rec.expected +
                         (w ? ", worst probe " + w->probe + " margin " + format_number(w->margin) : std::string());
        }
    } catch (const ParseError& e) {
        rec.status = kStatusParse;
        rec.reason = e.what();
    } catch (const PreconditionError& e) {
        rec.status = kStatusPrecondition;
        rec.reason = e.what();
    } catch (const SolverError& e) {
        rec.status = kStatusSolver;
        rec.reason = e.what();
    } catch (const std::exception& e) {
        rec.status = kStatusSolver;
        rec.reason = e.what();
    }
    if (rec.status >= kStatusParse) rec.verdict = "error";
    rec.reason = flatten(rec.reason);
    rec.end = iso_now();
    return rec;
}

SuiteResult run_suite(const std::vector<ScenarioSpec>& specs, const std::filesystem::path& root, int jobs) {
    if (specs.empty()) throw ParseError("suite contains no scenarios");
    std::set<std::string> ids, dirs;
    for (const auto& s : specs) {
        if (!ids.insert(s.id()).second) throw ParseError("duplicate scenario id '" + s.id() + "'");
        if (!dirs.insert(output_dir_of(s).generic_string()).second) {
            throw ParseError("scenario '" + s.id() + "': output directory is shared with another scenario");
        }
    }
    std::filesystem::create_directories(root);

    std::vector<RunRecord> records(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) records[i] = run_scenario(specs[i], root);
    };
    const std::size_t n = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, specs.size());
    std::vector<std::thread> pool;
    for (std::size_t j = 1; j < n; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::sort(records.begin(), records.end(),
              [](const RunRecord& a, const RunRecord& b) { return a.scenario_id < b.scenario_id; });
    SuiteResult result;
    for (const auto& r : records) result.status = std::max(result.status, r.status);
    result.records = std::move(records);

    std::ofstream summary(root / "summary.csv", std::ios::binary | std::ios::trunc);
    write_summary(result.records, summary);
    std::ofstream timing(root / "timing.csv", std::ios::binary | std::ios::trunc);
    write_timing(result.records, timing);
    if (!summary || !timing) throw SolverError("cannot write summary files under '" + root.string() + "'");
    return result;
}

void write_summary(const std::vector<RunRecord>& records, std::ostream& os) {
    os << "scenario_id,task,verdict,expected,status,worst_margin,version,files\n";
    for (const auto& r : records) {
        std::string files;
        for (const auto& f : r.files) files += (files.empty() ? "" : ";") + f;
        os << csv_field(r.scenario_id) << ',' << csv_field(r.task) << ',' << r.verdict << ',' << r.expected << ','
           << r.status << ',' << format_number(r.worst_margin) << ',' << csv_field(r.version) << ','
           << csv_field(files) << '\n';
    }
}

void write_timing(const std::vector<RunRecord>& records, std::ostream& os) {
    os << "scenario_id,start,end\n";
    for (const auto& r : records) os << csv_field(r.scenario_id) << ',' << r.start << ',' << r.end << '\n';
}

std::string diagnostic_line(const RunRecord& r) {
    return "smms: status=" + std::to_string(r.status) + " scenario=" + r.scenario_id + " reason=\"" + r.reason + "\"";
}

} // namespace smms
