#include "smms/kernels.hpp"

namespace smms::kernels::serial {

void apply_stencil(const Stencil& L, std::span<const double> u, std::span<double> out) {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double um = i > 0 ? u[i - 1] : (L.periodic ? u[n - 1] : 0.0);
        const double up = i + 1 < n ? u[i + 1] : (L.periodic ? u[0] : 0.0);
        out[i] = L.lower[i] * um + L.diag[i] * u[i] + L.upper[i] * up;
    }
}

void carre_du_champ(const Stencil& L, std::span<const double> u, std::span<const double> v,
                    std::span<double> out) {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = i > 0 ? i - 1 : (L.periodic ? n - 1 : i);
        const std::size_t ip = i + 1 < n ? i + 1 : (L.periodic ? 0 : i);
        const double luv = L.lower[i] * u[im] * v[im] + L.diag[i] * u[i] * v[i] + L.upper[i] * u[ip] * v[ip];
        const double lu = L.lower[i] * u[im] + L.diag[i] * u[i] + L.upper[i] * u[ip];
        const double lv = L.lower[i] * v[im] + L.diag[i] * v[i] + L.upper[i] * v[ip];
        out[i] = 0.5 * (luv - u[i] * lv - v[i] * lu);
    }
}

void gradient(std::span<const double> u, double h, bool periodic, std::span<double> out) {
    const std::size_t n = u.size();
    const double inv = 0.5 / h;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && i + 1 < n) {
            out[i] = (u[i + 1] - u[i - 1]) * inv;
        } else if (periodic) {
            const std::size_t im = i > 0 ? i - 1 : n - 1;
            const std::size_t ip = i + 1 < n ? i + 1 : 0;
            out[i] = (u[ip] - u[im]) * inv;
        } else if (i == 0) {
            out[i] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv;
        } else {
            out[i] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv;
        }
    }
}

void second_difference(std::span<const double> u, double h, bool periodic, std::span<double> out) {
    const std::size_t n = u.size();
    const double ih2 = 1.0 / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && i + 1 < n) {
            out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * ih2;
        } else if (periodic) {
            const std::size_t im = i > 0 ? i - 1 : n - 1;
            const std::size_t ip = i + 1 < n ? i + 1 : 0;
            out[i] = (u[ip] - 2.0 * u[i] + u[im]) * ih2;
        } else if (i == 0) {
            out[i] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) * ih2;
        } else {
            out[i] = (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) * ih2;
        }
    }
}

double weighted_sum(std::span<const double> w, std::span<const double> a) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i];
    return s;
}

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
    return s;
}

} // namespace smms::kernels::serial
