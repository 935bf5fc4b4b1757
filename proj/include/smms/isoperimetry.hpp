#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "smms/report.hpp"
#include "smms/space.hpp"

namespace smms {

double gauss_pdf(double a);
double gauss_cdf(double a);
// Bracketed Newton on [-12, 12] to 1e-13; s outside (0, 1) is rejected.
double gauss_cdf_inv(double s);
// gauss_pdf(gauss_cdf_inv(v)), 0 at v = 0 and v = 1.
double gauss_profile(double v);

// n omega_n^{1/n} v^{1 - 1/n}
double euclidean_profile(int n, double v);
// int_0^theta sin^k t dt by the reduction recurrence.
double sin_power_integral(int k, double theta);
// Normalized perimeter of the cap of S^n with normalized volume v.
double sphere_cap_profile(int n, double v);
// Colatitude of that cap.
double sphere_cap_angle(int n, double v);

/// Finite union of disjoint closed intervals in canonical (sorted, merged)
/// form. Endpoints may be infinite to describe half-lines.
class IntervalUnion {
public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<std::pair<double, double>> intervals);

    static IntervalUnion half_line(double a) { return IntervalUnion({{-kInf, a}}); }

    const std::vector<std::pair<double, double>>& intervals() const noexcept { return parts_; }
    bool empty() const noexcept { return parts_.empty(); }
    // Lebesgue measure.
    double length() const;
    // Pairwise sums, merged.
    IntervalUnion minkowski_sum(const IntervalUnion& other) const;

    static constexpr double kInf = std::numeric_limits<double>::infinity();

private:
    std::vector<std::pair<double, double>> parts_;
};

// mu(A) for the space's normalized density e^{-phi}/Z, by composite Gauss-Legendre.
double measure(const WeightedSpace& space, const IntervalUnion& A);

enum class MinkowskiMode { Analytic, EpsilonSweep };

double minkowski_content_1d(const WeightedSpace& space, const IntervalUnion& A, MinkowskiMode mode);

// Standard Gaussian line: mu(A) and mu+(A) in closed form.
double gaussian_measure(const IntervalUnion& A);
double gaussian_perimeter(const IntervalUnion& A);

// mu+(A) - I(mu(A)) >= -1e-8.
InequalityReport gaussian_iso_check(const IntervalUnion& A);
// mu+(A) - sqrt(k) I(mu(A)) >= -1e-8 on a normalized 1-D space.
InequalityReport cd_iso_check(const SpacePtr& space, double k, const IntervalUnion& A);

struct Box {
    std::vector<double> sides;
};

// Vol(A+B)^{1/n} >= Vol(A)^{1/n} + Vol(B)^{1/n}.
InequalityReport brunn_minkowski_check(const Box& A, const Box& B);
InequalityReport brunn_minkowski_check(const IntervalUnion& A, const IntervalUnion& B);

struct ProfileCurve {
    std::string model;
    std::vector<double> v;
    std::vector<double> I;
};

// count points on [0, 1] (mass fraction) or [0, v_max] for Euclidean models.
ProfileCurve sample_profile(const ModelSpace& model, int count, double v_max = 1.0);

} // namespace smms
