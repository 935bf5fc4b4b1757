#include "smms/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smms/fields.hpp"
#include "smms/kernels.hpp"

namespace smms {

namespace {

struct NodeRange {
    std::size_t begin;
    std::size_t end;
};

NodeRange interior(const WeightedSpace& s) {
    const std::size_t m = s.interior_margin();
    return {m, s.size() - m};
}

std::vector<double> apply_op(const Stencil& L, std::span<const double> u) {
    std::vector<double> out(u.size());
    kernels::parallel::apply_stencil(L, u, out);
    return out;
}

std::vector<double> grad(const WeightedSpace& s, std::span<const double> u) {
    std::vector<double> out(u.size());
    kernels::parallel::gradient(u, s.h(), s.periodic(), out);
    return out;
}

std::vector<double> hess(const WeightedSpace& s, std::span<const double> u) {
    std::vector<double> out(u.size());
    kernels::parallel::second_difference(u, s.h(), s.periodic(), out);
    return out;
}

std::vector<double> cdc(const Stencil& L, std::span<const double> u, std::span<const double> v) {
    std::vector<double> out(u.size());
    kernels::parallel::carre_du_champ(L, u, v, out);
    return out;
}

std::vector<double> square(std::span<const double> a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * a[i];
    return out;
}

std::vector<double> weight_second(const WeightedSpace& s) {
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s.weight().d2(s.nodes()[i]);
    return out;
}

double sup_interior(const WeightedSpace& s, const std::vector<double>& r) {
    const auto [b, e] = interior(s);
    double worst = 0;
    for (std::size_t i = b; i < e; ++i) worst = std::max(worst, std::abs(r[i]));
    return worst;
}

} // namespace

ScalarField gradient(const ScalarField& f) {
    return ScalarField(f.space(), grad(*f.space(), f.values()));
}

ScalarField second_derivative(const ScalarField& f) {
    return ScalarField(f.space(), hess(*f.space(), f.values()));
}

ScalarField laplacian_phi(const ScalarField& f) {
    return ScalarField(f.space(), apply_op(f.space()->laplacian(), f.values()));
}

ScalarField gamma1(const ScalarField& u, const ScalarField& v) {
    require_same_space(u, v);
    return ScalarField(u.space(), cdc(u.space()->laplacian(), u.values(), v.values()));
}

ScalarField gamma1(const ScalarField& u) { return gamma1(u, u); }

ScalarField gamma2(const ScalarField& u) {
    const Stencil& L = u.space()->laplacian();
    const auto g = cdc(L, u.values(), u.values());
    const auto lu = apply_op(L, u.values());
    const auto lg = apply_op(L, g);
    const auto g_ulu = cdc(L, u.values(), lu);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * lg[i] - g_ulu[i];
    return ScalarField(u.space(), std::move(out));
}

ScalarField ricci_phi_m(const SpacePtr& space, double m) {
    if (!std::isinf(m) && !(m > 1.0)) {
        throw PreconditionError("ricci_phi_m: dimension parameter must satisfy m > 1 (got " + format_number(m) + ")");
    }
    const WeightSpec& w = space->weight();
    return ScalarField::sample(space, [&](double x) {
        const double d1 = w.d1(x);
        const double d2 = w.d2(x);
        return std::isinf(m) ? d2 : d2 - d1 * d1 / (m - 1.0);
    });
}

CDParams CDParams::make(double k, double m, const WeightSpec& weight) {
    if (std::isnan(k) || std::isnan(m)) throw PreconditionError("CDParams: k and m must be numbers");
    if (m < 1.0) throw PreconditionError("CDParams: m must be >= 1 for one-dimensional spaces");
    if (m == 1.0 && !weight.is_constant()) {
        throw PreconditionError("CDParams: m = n = 1 requires a constant weight");
    }
    return CDParams{k, m};
}

std::vector<Probe> standard_probes(const SpacePtr& space, std::uint64_t seed, int random_count) {
    std::vector<Probe> probes;
    if (space->periodic()) {
        const double f = 2.0 * std::numbers::pi / space->length();
        probes.push_back({"sin", ScalarField::sample(space, [f](double x) { return std::sin(f * x); })});
        probes.push_back({"cos2", ScalarField::sample(space, [f](double x) { return std::cos(2 * f * x); })});
        probes.push_back({"sin3", ScalarField::sample(space, [f](double x) { return std::sin(3 * f * x); })});
    } else {
        probes.push_back({"x", ScalarField::sample(space, [](double x) { return x; })});
        probes.push_back({"x2", ScalarField::sample(space, [](double x) { return x * x; })});
        probes.push_back({"sin", ScalarField::sample(space, [](double x) { return std::sin(x); })});
    }
    for (int r = 0; r < random_count; ++r) {
        probes.push_back({"random" + std::to_string(r),
                          random_bandlimited(space, seed + static_cast<std::uint64_t>(r), 4, 0.5, 1.0)});
    }
    return probes;
}

double probe_derivative_scale(const ScalarField& w) {
    const WeightedSpace& s = *w.space();
    const std::size_t n = s.size();
    const double h = s.h();
    const auto u = w.values();
    auto at = [&](std::ptrdiff_t i) {
        const auto N = static_cast<std::ptrdiff_t>(n);
        return u[static_cast<std::size_t>(((i % N) + N) % N)];
    };
    const std::size_t b = s.periodic() ? 0 : 2;
    const std::size_t e = s.periodic() ? n : n - 2;
    double scale = 0;
    for (std::size_t k = b; k < e; ++k) {
        const auto i = static_cast<std::ptrdiff_t>(k);
        const double d1 = (at(i + 1) - at(i - 1)) / (2 * h);
        const double d2 = (at(i + 1) - 2 * at(i) + at(i - 1)) / (h * h);
        const double d3 = (at(i + 2) - 2 * at(i + 1) + 2 * at(i - 1) - at(i - 2)) / (2 * h * h * h);
        const double d4 = (at(i + 2) - 4 * at(i + 1) + 6 * at(i) - 4 * at(i - 1) + at(i - 2)) / (h * h * h * h);
        scale = std::max(scale, std::abs(d1) + std::abs(d2) + std::abs(d3) + std::abs(d4));
    }
    return scale;
}

double cd_tolerance(const ScalarField& w) {
    const double h = w.space()->h();
    return 10.0 * h * h * probe_derivative_scale(w);
}

InequalityReport cd_check(const SpacePtr& space, CDParams params, const std::vector<Probe>& probes) {
    if (probes.empty()) throw PreconditionError("cd_check: probe list is empty");
    CDParams::make(params.k, params.m, space->weight());

    InequalityReport report("cd_check", 0.0);
    report.note("k", params.k);
    report.note("m", std::isinf(params.m) ? std::string("inf") : format_number(params.m));
    report.note("m_convention", "any m > 1 accepted on 1-D spaces (CD definition quotes m >= 2, curvature "
                                "tensor quotes m >= n)");
    report.note("h", space->h());

    const auto x = space->nodes();
    const auto [b, e] = interior(*space);
    double max_tol = 0;
    for (const auto& probe : probes) {
        if (probe.field.space() != space) throw PreconditionError("cd_check: probe '" + probe.name + "' on another space");
        const auto g2 = gamma2(probe.field);
        const auto g = gamma1(probe.field);
        const auto lw = laplacian_phi(probe.field);
        const double tol = cd_tolerance(probe.field);
        max_tol = std::max(max_tol, tol);
        report.note("tol_" + probe.name, tol);
        for (std::size_t i = b; i < e; ++i) {
            const double dim_term = std::isinf(params.m) ? 0.0 : lw[i] * lw[i] / params.m;
            report.add(probe.name, x[i], kNotApplicable, dim_term + params.k * g[i], g2[i], tol);
        }
    }
    report.set_tol(max_tol);
    report.finalize();
    return report;
}

double bochner_residual(const ScalarField& u) {
    const WeightedSpace& s = *u.space();
    const Stencil& L = s.laplacian();
    const auto g = grad(s, u.values());
    const auto lu = apply_op(L, u.values());
    const auto glu = grad(s, lu);
    const auto lg2 = apply_op(L, square(g));
    const auto hu = hess(s, u.values());
    const auto ric = weight_second(s);
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = 0.5 * lg2[i] - g[i] * glu[i] - hu[i] * hu[i] - ric[i] * g[i] * g[i];
    }
    return sup_interior(s, r);
}

double gamma_identity_residual(const ScalarField& u) {
    const WeightedSpace& s = *u.space();
    const auto g = gamma1(u);
    const auto du = grad(s, u.values());
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = g[i] - du[i] * du[i];
    return sup_interior(s, r);
}

double gamma2_bochner_residual(const ScalarField& u) {
    const WeightedSpace& s = *u.space();
    const auto g2 = gamma2(u);
    const auto du = grad(s, u.values());
    const auto hu = hess(s, u.values());
    const auto ric = weight_second(s);
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = g2[i] - (hu[i] * hu[i] + ric[i] * du[i] * du[i]);
    return sup_interior(s, r);
}

double jacobi_polynomial(int k, double alpha, double beta, double t) {
    if (k < 0) throw PreconditionError("jacobi_polynomial: degree must be >= 0");
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (t - 1.0);
    for (int n = 2; n <= k; ++n) {
        const double s = 2.0 * n + alpha + beta;
        const double a1 = 2.0 * n * (n + alpha + beta) * (s - 2.0);
        const double a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        const double a3 = (s - 2.0) * (s - 1.0) * s;
        const double a4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * s;
        const double next = ((a2 + a3 * t) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

struct JacobiRun {
    double h;
    double residual;
    double eigenvalue;
    double sup_y;
};

JacobiRun jacobi_run(double alpha, double beta, int kdeg, std::size_t nodes, double delta) {
    auto space = build_space(Interval{-1.0 + delta, 1.0 - delta, Boundary::Neumann},
                             WeightSpec::jacobi(alpha, beta), nodes, false);
    const Stencil L = weighted_stencil(*space, [](double t) { return 1.0 - t * t; });
    const auto y = ScalarField::sample(space, [&](double t) { return jacobi_polynomial(kdeg, alpha, beta, t); });
    const auto ly = apply_op(L, y.values());
    const double lambda = kdeg * (kdeg + alpha + beta + 1.0);
    const auto w = space->quad_weights();
    const auto [b, e] = interior(*space);
    double res = 0, num = 0, den = 0, sup_y = 0;
    for (std::size_t i = b; i < e; ++i) {
        res = std::max(res, std::abs(ly[i] + lambda * y[i]));
        num += w[i] * ly[i] * y[i];
        den += w[i] * y[i] * y[i];
        sup_y = std::max(sup_y, std::abs(y[i]));
    }
    return {space->h(), res, -num / den, sup_y};
}

} // namespace

InequalityReport jacobi_eigencheck(double alpha, double beta, int kdeg, std::size_t nodes, double delta) {
    if (!(alpha > -1.0) || !(beta > -1.0)) throw PreconditionError("jacobi_eigencheck: alpha and beta must be > -1");
    if (kdeg < 0 || kdeg > 10) throw PreconditionError("jacobi_eigencheck: degree must be in [0, 10]");
    if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("jacobi_eigencheck: delta must be in (0, 1)");

    const double lambda = kdeg * (kdeg + alpha + beta + 1.0);
    const JacobiRun coarse = jacobi_run(alpha, beta, kdeg, nodes, delta);
    const JacobiRun fine = jacobi_run(alpha, beta, kdeg, 2 * nodes, delta);
    const double tol = 10.0 * coarse.h * coarse.h * (1.0 + lambda) * coarse.sup_y;
    // Rounding floor of the nested h^-2 stencil.
    const double floor = 1e-9 * (1.0 + lambda) * coarse.sup_y;

    InequalityReport report("jacobi_eigencheck", tol);
    report.note("alpha", alpha);
    report.note("beta", beta);
    report.note("k", static_cast<double>(kdeg));
    report.note("eigenvalue_expected", -lambda);
    report.note("eigenvalue_coarse", -coarse.eigenvalue);
    report.note("eigenvalue_fine", -fine.eigenvalue);
    report.note("residual_coarse", coarse.residual);
    report.note("residual_fine", fine.residual);
    report.note("h_coarse", coarse.h);
    report.note("h_fine", fine.h);

    report.add("residual", kNotApplicable, kNotApplicable, coarse.residual, tol, 0.0);
    report.add("eigenvalue", kNotApplicable, kNotApplicable, std::abs(coarse.eigenvalue - lambda), tol, 0.0);
    if (fine.residual > floor) {
        const double ratio = coarse.residual / fine.residual;
        report.note("refinement_ratio", ratio);
        report.add("refinement_ratio", kNotApplicable, kNotApplicable, 3.5, ratio, 0.0);
    }
    report.finalize();
    return report;
}

} // namespace smms
