#pragma once

// Reference values computed without the library: Boost quadrature and
// special functions, or closed forms typed in directly.

#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <boost/math/special_functions/jacobi.hpp>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-15);
}

inline double gaussian_mass(double half_width) {
    return integrate([](double x) { return std::exp(-0.5 * x * x); }, -half_width, half_width);
}

inline double sin_power_mass(int k) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([k](double t) { return std::pow(std::sin(t), k); }, 0.0, std::numbers::pi);
}

inline double ou_moment(int k, double half_width) {
    const double z = gaussian_mass(half_width);
    return integrate([k](double x) { return std::pow(x, k) * std::exp(-0.5 * x * x); }, -half_width, half_width) / z;
}

inline double normal_pdf(double a) { return std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double a) { return 0.5 * boost::math::erfc(-a / std::numbers::sqrt2); }

// Probabilists' Hermite polynomial from Boost's physicists' family.
inline double hermite_he(unsigned n, double x) {
    return std::pow(2.0, -0.5 * n) * boost::math::hermite(n, x / std::numbers::sqrt2);
}

inline double jacobi(unsigned n, double alpha, double beta, double t) { return boost::math::jacobi(n, alpha, beta, t); }

// Normalized cap volume and boundary measure on S^n at colatitude theta.
inline double sphere_cap_volume(int n, double theta) {
    const double z = sin_power_mass(n - 1);
    return integrate([n](double t) { return std::pow(std::sin(t), n - 1); }, 0.0, theta) / z;
}
inline double sphere_cap_perimeter(int n, double theta) { return std::pow(std::sin(theta), n - 1) / sin_power_mass(n - 1); }

} // namespace oracle
