#pragma once

#include <string>
#include <vector>

#include "smms/field.hpp"
#include "smms/report.hpp"

namespace smms {

struct FunctionalValue {
    enum class Name { Var, Ent, Energy, Fisher, LpNorm };
    Name name;
    double value = 0;
    double p = kNotApplicable;
    SpacePtr space;
};

std::string to_string(FunctionalValue::Name name);

// Var = int f^2 - (int f)^2
double variance(const ScalarField& f);
// Ent = int f log f - (int f) log int f. Requires f > 0; values are floored
// at 1e-300 before taking logs.
double entropy(const ScalarField& f);
// E = int Gamma(f) dmu with Gamma from the product definition.
double energy(const ScalarField& f);
// I = int Gamma(f) / f dmu. Requires f > 0.
double fisher(const ScalarField& f);

FunctionalValue evaluate(FunctionalValue::Name name, const ScalarField& f, double p = kNotApplicable);

// (int |f|^p)^{1/p}, p >= 1.
double lp_norm(const ScalarField& f, double p);

// d/dp ||f||_p = p^{-2} ||f||_p^{1-p} Ent(f^p). Requires p > 1, f > 0.
double lp_norm_derivative(const ScalarField& f, double p);
// Same derivative through p^{-2} ||f||_p^{1-p} int f^p log(f^p / ||f||_p^p).
double lp_norm_derivative_normalized_form(const ScalarField& f, double p);

// Second differences of r -> log ||f||_{1/r} over a strictly increasing grid
// of at least five points in (0, 1), divided differences for uneven spacing.
InequalityReport log_norm_convexity_check(const ScalarField& f, const std::vector<double>& r_grid);

} // namespace smms
