#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "smms/fields.hpp"
#include "smms/operators.hpp"

using namespace smms;

namespace {

constexpr double kPi = std::numbers::pi;

// sup over nodes [margin, n - margin) with |x| <= R of |f - g(x)|
double sup_error(const ScalarField& f, const std::function<double(double)>& g, std::size_t margin = 0,
                 double R = INFINITY) {
    double e = 0;
    for (std::size_t i = margin; i + margin < f.size(); ++i) {
        const double x = f.space()->nodes()[i];
        if (std::abs(x) <= R) e = std::max(e, std::abs(f[i] - g(x)));
    }
    return e;
}

double inner(const ScalarField& a, const ScalarField& b) { return integrate(a * b); }

SpacePtr ou(std::size_t n = 512) { return build_space(TruncatedLine{8}, WeightSpec::quadratic(), n, true); }
SpacePtr circle(std::size_t n = 256) { return build_space(Circle{2 * kPi}, WeightSpec::zero(), n, true); }

} // namespace

TEST_SUITE("operators") {
    TEST_CASE("gradient oracles") {
        for (std::size_t n : {128u, 256u}) {
            const auto c = circle(n);
            const double h2 = c->h() * c->h();
            CHECK(sup_error(gradient(ScalarField::sample(c, [](double x) { return std::sin(x); })),
                            [](double x) { return std::cos(x); }) < h2);
        }
        const auto c = circle();
        CHECK(sup_error(gradient(ScalarField::constant(c, 3.0)), [](double) { return 0.0; }) == 0.0);
        const auto iv = build_space(Interval{0, 1}, WeightSpec::zero(), 200, true);
        const double h2 = iv->h() * iv->h();
        CHECK(sup_error(gradient(ScalarField::sample(iv, [](double x) { return x * x; })),
                        [](double x) { return 2 * x; }) < 10 * h2);
    }

    TEST_CASE("phi-Laplacian oracles") {
        const auto s = ou();
        const double h2 = s->h() * s->h();
        CHECK(sup_error(laplacian_phi(ScalarField::sample(s, [](double x) { return x; })),
                        [](double x) { return -x; }, 0, 4) < 10 * h2);
        const auto c = circle();
        CHECK(sup_error(laplacian_phi(ScalarField::sample(c, [](double x) { return std::sin(x); })),
                        [](double x) { return -std::sin(x); }) < c->h() * c->h());
        const auto iv = build_space(Interval{0, 1}, WeightSpec::linear(1.0), 400, true);
        CHECK(sup_error(laplacian_phi(ScalarField::sample(iv, [](double x) { return x * x; })),
                        [](double x) { return 2 - 2 * x; }, 2) < 10 * iv->h() * iv->h());
    }

    TEST_CASE("Hermite polynomials are OU eigenfunctions") {
        // Truncation error grows like |x|^{k+2} h^2, so compare on |x| <= 4.
        const auto s = ou(1024);
        const double h2 = s->h() * s->h();
        for (unsigned k = 1; k <= 3; ++k) {
            const auto he = ScalarField::sample(s, [k](double x) { return oracle::hermite_he(k, x); });
            const double lam = static_cast<double>(k);
            CHECK(sup_error(laplacian_phi(he), [&](double x) { return -lam * oracle::hermite_he(k, x); }, 0, 4) <
                  h2 * (1 + std::pow(4.0, k + 1)));
        }
    }

    TEST_CASE("carre du champ oracles") {
        const auto s = ou();
        const auto x = ScalarField::sample(s, [](double v) { return v; });
        CHECK(sup_error(gamma1(x), [](double) { return 1.0; }, 2) < 10 * s->h() * s->h());
        CHECK(sup_error(gamma1(ScalarField::constant(s, 2.0)), [](double) { return 0.0; }) < 1e-12);
        const auto c = circle();
        const auto sn = ScalarField::sample(c, [](double v) { return std::sin(v); });
        const auto cs = ScalarField::sample(c, [](double v) { return std::cos(v); });
        CHECK(sup_error(gamma1(sn, cs), [](double v) { return -std::sin(v) * std::cos(v); }) < c->h() * c->h());
    }

    TEST_CASE("Gamma2 oracles") {
        const auto s = ou();
        const double h2 = s->h() * s->h();
        CHECK(sup_error(gamma2(ScalarField::sample(s, [](double v) { return v; })), [](double) { return 1.0; }, 2) <
              10 * h2);
        CHECK(sup_error(gamma2(ScalarField::sample(s, [](double v) { return v * v; })),
                        [](double v) { return 4 + 4 * v * v; }, 2) < 10 * h2 * (1 + 4 * 64));
        const auto iv = build_space(Interval{0, 1}, WeightSpec::zero(), 200, true);
        CHECK(sup_error(gamma2(ScalarField::sample(iv, [](double v) { return v; })), [](double) { return 0.0; }, 2) <
              1e-6);
    }

    TEST_CASE("Bakry-Emery Ricci") {
        const auto s = ou();
        CHECK(sup_error(ricci_phi_m(s, kInfiniteDimension), [](double) { return 1.0; }) == 0.0);
        CHECK(sup_error(ricci_phi_m(s, 3.0), [](double x) { return 1 - x * x / 2; }) < 1e-13 * 64);
        const auto c = circle();
        CHECK(sup_error(ricci_phi_m(c, 5.0), [](double) { return 0.0; }) == 0.0);
        CHECK_THROWS_AS(ricci_phi_m(s, 1.0), PreconditionError);
        CHECK_THROWS_AS(CDParams::make(0, 1.0, WeightSpec::quadratic()), PreconditionError);
        CHECK_NOTHROW(CDParams::make(0, 1.0, WeightSpec::zero()));
    }

    TEST_CASE("CD certification on the OU space") {
        const auto s = ou();
        const auto pass = cd_check(s, CDParams::make(1, kInfiniteDimension, s->weight()), standard_probes(s));
        CHECK(pass.passed());
        std::vector<Probe> x{{"x", ScalarField::sample(s, [](double v) { return v; })}};
        const auto fail = cd_check(s, CDParams::make(2, kInfiniteDimension, s->weight()), x);
        CHECK(fail.verdict() == Verdict::Fail);
        CHECK(fail.worst_margin() < -0.5);
        CHECK(fail.worst()->probe == "x");
        CHECK(!fail.metadata_value("m_convention").empty());
    }

    TEST_CASE("flat circle satisfies CD(0, inf) with margin near zero on linear phases") {
        const auto c = circle();
        const auto rep = cd_check(c, CDParams::make(0, kInfiniteDimension, c->weight()), standard_probes(c, 0, 0));
        CHECK(rep.passed());
    }

    TEST_CASE("CD monotonicity in k and m") {
        const auto s = ou(256);
        const auto probes = standard_probes(s, 5, 2);
        for (double k : {1.0, 0.5}) {
            for (double m : {6.0, 20.0}) {
                const auto base = cd_check(s, CDParams::make(k, m, s->weight()), probes);
                if (!base.passed()) continue;
                for (double k2 : {k, k - 0.5}) {
                    for (double m2 : {m, 2 * m, kInfiniteDimension}) {
                        const auto r = cd_check(s, CDParams::make(k2, m2, s->weight()), probes);
                        CHECK(r.passed());
                        CHECK(r.worst_margin() >= base.worst_margin() - 1e-12);
                    }
                }
            }
        }
    }

    TEST_CASE("Bochner residuals") {
        const auto s = ou();
        CHECK(bochner_residual(ScalarField::sample(s, [](double v) { return v; })) < 10 * s->h() * s->h());
        CHECK(bochner_residual(ScalarField::constant(s, 1.5)) < 1e-10);
        auto res = [](std::size_t n) {
            const auto c = circle(n);
            return bochner_residual(ScalarField::sample(c, [](double v) { return std::sin(v); }));
        };
        CHECK(res(64) / res(128) >= 3.5);
        CHECK(res(128) / res(256) >= 3.5);
    }

    TEST_CASE("Gamma identity and Gamma2-Bochner residuals are second order") {
        for (bool circ : {false, true}) {
            auto make = [&](std::size_t n) { return circ ? circle(n) : ou(n); };
            double prev1 = 0, prev2 = 0;
            for (std::size_t n : {256u, 512u, 1024u}) {
                const auto s = make(n);
                const auto u = ScalarField::sample(s, [](double v) { return std::sin(v) + 0.3 * std::cos(2 * v); });
                const double r1 = gamma_identity_residual(u), r2 = gamma2_bochner_residual(u);
                if (prev1 > 0) {
                    CHECK(prev1 / r1 >= 3.2);
                    CHECK(prev2 / r2 >= 3.2);
                }
                prev1 = r1;
                prev2 = r2;
            }
        }
    }

    TEST_CASE("phi-Laplacian is self-adjoint for the quadrature masses") {
        for (const auto& s : {ou(300), circle(200), build_space(Interval{0, 2}, WeightSpec::linear(0.7), 150, true)}) {
            const auto u = random_bandlimited(s, 1);
            const auto v = random_bandlimited(s, 2, 5, 0.8, 0.3);
            const double lhs = inner(laplacian_phi(u), v), rhs = inner(u, laplacian_phi(v));
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::sqrt(inner(u, u) * inner(v, v)));
        }
    }

    TEST_CASE("integration by parts matches the energy") {
        const auto s = ou(512);
        const auto u = ScalarField::sample(s, [](double x) { return std::sin(x) + 0.2 * x; });
        const double lhs = inner(laplacian_phi(u), u);
        const double rhs = -integrate(gamma1(u));
        CHECK(std::abs(lhs - rhs) < 10 * s->h() * s->h());
    }

    TEST_CASE("Jacobi eigencheck") {
        for (double t : {-0.7, 0.0, 0.3, 0.9}) {
            CHECK(jacobi_polynomial(2, 0, 0, t) == doctest::Approx(oracle::jacobi(2, 0, 0, t)).epsilon(1e-14));
            CHECK(jacobi_polynomial(3, 1, 0.5, t) == doctest::Approx(oracle::jacobi(3, 1, 0.5, t)).epsilon(1e-13));
        }
        const auto k2 = jacobi_eigencheck(0, 0, 2);
        CHECK(k2.passed());
        CHECK(std::stod(k2.metadata_value("eigenvalue_fine")) == doctest::Approx(-6).epsilon(1e-3));
        const auto k0 = jacobi_eigencheck(0, 0, 0);
        CHECK(k0.passed());
        CHECK(std::stod(k0.metadata_value("residual_coarse")) < 1e-10);
        const auto a1 = jacobi_eigencheck(1, 0, 1);
        CHECK(a1.passed());
        CHECK(std::stod(a1.metadata_value("eigenvalue_fine")) == doctest::Approx(-3).epsilon(1e-3));
    }
}
