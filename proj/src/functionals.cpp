#include "smms/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "smms/kernels.hpp"
#include "smms/operators.hpp"

namespace smms {

namespace {

constexpr double kLogFloor = 1e-300;

void require_positive(const ScalarField& f, const char* what) {
    const auto v = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0)) {
            throw PreconditionError(std::string(what) + ": f must be > 0, got " + format_number(v[i]) +
                                    " at node " + std::to_string(i));
        }
    }
}

double xlogx(double x) { return x * std::log(std::max(x, kLogFloor)); }

// Ent of a nonnegative sample vector.
double entropy_of(const WeightedSpace& s, const std::vector<double>& g) {
    std::vector<double> gl(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) gl[i] = xlogx(g[i]);
    const double mass = integrate(s, g);
    return integrate(s, gl) - xlogx(mass);
}

std::vector<double> pow_abs(std::span<const double> f, double p) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::pow(std::abs(f[i]), p);
    return out;
}

} // namespace

std::string to_string(FunctionalValue::Name name) {
    switch (name) {
    case FunctionalValue::Name::Var: return "var";
    case FunctionalValue::Name::Ent: return "ent";
    case FunctionalValue::Name::Energy: return "energy";
    case FunctionalValue::Name::Fisher: return "fisher";
    case FunctionalValue::Name::LpNorm: return "lp_norm";
    }
    return "unknown";
}

double variance(const ScalarField& f) {
    const WeightedSpace& s = *f.space();
    const double mean = integrate(f);
    const double second = kernels::parallel::weighted_dot(s.quad_weights(), f.values(), f.values());
    return second - mean * mean;
}

double entropy(const ScalarField& f) {
    require_positive(f, "entropy");
    return entropy_of(*f.space(), {f.values().begin(), f.values().end()});
}

double energy(const ScalarField& f) { return integrate(gamma1(f)); }

double fisher(const ScalarField& f) {
    require_positive(f, "fisher");
    const ScalarField g = gamma1(f);
    std::vector<double> ratio(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) ratio[i] = g[i] / f[i];
    return integrate(*f.space(), ratio);
}

FunctionalValue evaluate(FunctionalValue::Name name, const ScalarField& f, double p) {
    FunctionalValue out{name, 0.0, p, f.space()};
    switch (name) {
    case FunctionalValue::Name::Var: out.value = variance(f); break;
    case FunctionalValue::Name::Ent: out.value = entropy(f); break;
    case FunctionalValue::Name::Energy: out.value = energy(f); break;
    case FunctionalValue::Name::Fisher: out.value = fisher(f); break;
    case FunctionalValue::Name::LpNorm: out.value = lp_norm(f, p); break;
    }
    return out;
}

double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1)) throw PreconditionError("lp_norm: p must be >= 1");
    return std::pow(integrate(*f.space(), pow_abs(f.values(), p)), 1.0 / p);
}

double lp_norm_derivative(const ScalarField& f, double p) {
    if (!(p > 1)) throw PreconditionError("lp_norm_derivative: p must be > 1");
    require_positive(f, "lp_norm_derivative");
    const WeightedSpace& s = *f.space();
    const std::vector<double> fp = pow_abs(f.values(), p);
    const double norm = std::pow(integrate(s, fp), 1.0 / p);
    return std::pow(norm, 1.0 - p) * entropy_of(s, fp) / (p * p);
}

double lp_norm_derivative_normalized_form(const ScalarField& f, double p) {
    if (!(p > 1)) throw PreconditionError("lp_norm_derivative: p must be > 1");
    require_positive(f, "lp_norm_derivative");
    const WeightedSpace& s = *f.space();
    std::vector<double> fp = pow_abs(f.values(), p);
    const double mass = integrate(s, fp);
    const double norm = std::pow(mass, 1.0 / p);
    for (double& g : fp) g *= std::log(std::max(g, kLogFloor) / mass);
    return std::pow(norm, 1.0 - p) * integrate(s, fp) / (p * p);
}

InequalityReport log_norm_convexity_check(const ScalarField& f, const std::vector<double>& r) {
    if (r.size() < 5) throw PreconditionError("log_norm_convexity_check: need at least 5 r values");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0 && r[i] < 1)) throw PreconditionError("log_norm_convexity_check: r must lie in (0, 1)");
        if (i > 0 && !(r[i] > r[i - 1])) {
            throw PreconditionError("log_norm_convexity_check: r grid must be strictly increasing");
        }
    }
    require_positive(f, "log_norm_convexity_check");

    std::vector<double> psi(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) psi[i] = std::log(lp_norm(f, 1.0 / r[i]));

    double scale = 0;
    for (double v : psi) scale = std::max(scale, std::abs(v));
    const double spacing = r.back() - r.front();
    scale = std::max(1.0, scale) / (spacing * spacing);

    InequalityReport rep("log_norm_convexity", 1e-8 * scale);
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        const double hl = r[i] - r[i - 1], hr = r[i + 1] - r[i];
        const double d2 = 2.0 * ((psi[i + 1] - psi[i]) / hr - (psi[i] - psi[i - 1]) / hl) / (hl + hr);
        rep.add("second_difference", r[i], kNotApplicable, 0.0, d2);
    }
    rep.note("scale", scale);
    rep.finalize();
    return rep;
}

} // namespace smms
