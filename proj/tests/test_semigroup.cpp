#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "smms/fields.hpp"
#include "smms/functionals.hpp"
#include "smms/operators.hpp"
#include "smms/semigroup.hpp"

using namespace smms;

namespace {

constexpr double kPi = std::numbers::pi;

SpacePtr ou(std::size_t n = 512) { return build_space(TruncatedLine{8}, WeightSpec::quadratic(), n, true); }
SpacePtr circle(std::size_t n = 256) { return build_space(Circle{2 * kPi}, WeightSpec::zero(), n, true); }

FlowConfig flow(double t_final, double dt = 1e-3) {
    FlowConfig c;
    c.t_final = t_final;
    c.dt = dt;
    return c;
}

double sup_diff(const ScalarField& a, const ScalarField& b) {
    double e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

} // namespace

TEST_SUITE("semigroup") {
    TEST_CASE("constants are invariant") {
        const auto s = ou(256);
        const auto h = heat_flow(s, ScalarField::constant(s, 1.7), flow(0.5));
        for (const auto& f : h.fields) CHECK(sup_diff(f, ScalarField::constant(s, 1.7)) < 1e-12);
    }

    TEST_CASE("OU eigenfunction decay") {
        const auto s = ou();
        const auto x = ScalarField::sample(s, [](double v) { return v; });
        const auto pt = evolve(x, 0.5, 1e-3);
        const auto err = pt - std::exp(-0.5) * x;
        CHECK(std::sqrt(integrate(err * err)) < 0.01 * std::sqrt(integrate(x * x)));
        const auto he2 = ScalarField::sample(s, [](double v) { return oracle::hermite_he(2, v); });
        const auto p2 = evolve(he2, 0.3, 1e-3);
        CHECK(integrate(p2 * he2) / integrate(he2 * he2) == doctest::Approx(std::exp(-0.6)).epsilon(1e-3));
    }

    TEST_CASE("circle eigenmode decays at the heat rate") {
        const auto c = circle();
        const auto f = ScalarField::sample(c, [](double x) { return std::sin(x); });
        const auto pt = evolve(f, 0.5, 1e-3);
        double err = 0;
        for (std::size_t i = 0; i < c->size(); ++i) err = std::max(err, std::abs(pt[i] - std::exp(-0.5) * std::sin(c->nodes()[i])));
        CHECK(err < 1e-6 + c->h() * c->h());
    }

    TEST_CASE("semigroup property, mass conservation, L2 contractivity") {
        const auto s = ou(256);
        const auto f = random_bandlimited(s, 4);
        const auto both = evolve(f, 0.4, 1e-3);
        const auto twice = evolve(evolve(f, 0.15, 1e-3), 0.25, 1e-3);
        CHECK(sup_diff(both, twice) < 1e-6);
        const auto h = heat_flow(s, f, flow(0.3));
        double prev = lp_norm(f.map([](double v) { return std::abs(v); }), 2);
        for (const auto& g : h.fields) {
            CHECK(std::abs(integrate(g) - integrate(f)) < 1e-10);
            const double nrm = std::sqrt(integrate(g * g));
            CHECK(nrm <= prev + 1e-14);
            prev = nrm;
        }
    }

    TEST_CASE("variance decay pins the OU rate") {
        const auto s = ou();
        const auto d = variance_decay_check(s, ScalarField::sample(s, [](double v) { return v; }), 1.0, flow(0.5));
        CHECK(d.passed());
        CHECK(std::abs(d.observed_ratio.back() / d.theoretical_rate.back() - 1) < 0.01);
        const auto c = variance_decay_check(s, ScalarField::constant(s, 2.0), 1.0, flow(0.5));
        CHECK(c.passed());
    }

    TEST_CASE("entropy decay") {
        const auto s = ou();
        CHECK(entropy_decay_check(s, ScalarField::sample(s, [](double x) { return 1 + 0.5 * std::sin(x); }), 1.0, flow(0.5))
                  .passed());
        for (int seed = 0; seed < 3; ++seed) {
            CHECK(entropy_decay_check(s, random_bandlimited(s, static_cast<std::uint64_t>(seed)), 1.0, flow(0.5)).passed());
        }
    }

    TEST_CASE("gradient commutation") {
        const auto s = ou();
        const auto rep = commutation_check(s, ScalarField::sample(s, [](double v) { return v; }), 1.0, flow(0.5));
        CHECK(rep.passed());
        CHECK(std::abs(rep.worst_margin()) < 0.01);
        CHECK(commutation_check(s, ScalarField::constant(s, 1.0), 1.0, flow(0.2)).passed());
        const auto c = circle();
        CHECK(commutation_check(c, ScalarField::sample(c, [](double x) { return std::sin(3 * x); }), 0.0, flow(0.3)).passed());
    }

    TEST_CASE("Poincare and log-Sobolev") {
        const auto s = ou();
        const auto x = ScalarField::sample(s, [](double v) { return v; });
        const auto p = poincare_check(s, x, 1.0);
        CHECK(p.passed());
        CHECK(std::abs(variance(x) - energy(x)) < 1e-3);
        CHECK(poincare_check(s, ScalarField::constant(s, 1.0), 1.0).passed());
        CHECK(lsi_check(s, ScalarField::constant(s, 1.0), 1.0).passed());
        const auto f = ScalarField::sample(s, [](double v) { return 1 + 0.5 * std::sin(v); });
        CHECK(poincare_check(s, f, 1.0).worst_margin() > 0);
        CHECK(lsi_check(s, f, 1.0).worst_margin() > 0);
        for (int seed = 0; seed < 20; ++seed) CHECK(lsi_check(s, random_bandlimited(s, static_cast<std::uint64_t>(seed))).worst_margin() >= 0);
        CHECK_THROWS_AS(poincare_check(build_space(TruncatedLine{8}, WeightSpec::quadratic(), 64, false),
                                       ScalarField::constant(build_space(TruncatedLine{8}, WeightSpec::quadratic(), 64, false), 1.0), 1.0),
                        PreconditionError);
    }

    TEST_CASE("hypercontractivity at the critical time") {
        const auto s = ou();
        for (double p : {1.25, 1.5, 1.75}) {
            CHECK(hypercontractivity_check(s, ScalarField::sample(s, [](double x) { return 1 + 0.5 * std::sin(x / 2); }), p,
                                           flow(1.0))
                      .passed());
            CHECK(hypercontractivity_check(s, ScalarField::sample(s, [](double x) { return std::exp(x / 4); }), p, flow(1.0))
                      .passed());
            CHECK(hypercontractivity_check(s, ScalarField::constant(s, 2.0), p, flow(1.0)).passed());
        }
    }

    TEST_CASE("flow configuration") {
        FlowConfig bad;
        bad.dt = -1;
        CHECK_THROWS_AS(bad.validate(), PreconditionError);
        FlowConfig c = flow(0.5, 0.003);
        const auto ts = c.check_times();
        REQUIRE(ts.size() == 10);
        CHECK(ts.back() == doctest::Approx(0.5));
    }
}
