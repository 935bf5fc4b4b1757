#include "smms/linalg.hpp"

#include <cmath>

#include "smms/errors.hpp"

namespace smms {

namespace {

// Plain Thomas sweep on (a, b, c) with a[0] and c[n-1] ignored.
std::vector<double> thomas(const std::vector<double>& a, const std::vector<double>& b,
                           const std::vector<double>& c, const std::vector<double>& d) {
    const std::size_t n = b.size();
    std::vector<double> cp(n), dp(n), x(n);
    double piv = b[0];
    if (piv == 0.0 || !std::isfinite(piv)) throw SolverError("tridiagonal solve: zero pivot at row 0");
    cp[0] = n > 1 ? c[0] / piv : 0.0;
    dp[0] = d[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = b[i] - a[i] * cp[i - 1];
        if (piv == 0.0 || !std::isfinite(piv)) {
            throw SolverError("tridiagonal solve: zero pivot at row " + std::to_string(i));
        }
        cp[i] = i + 1 < n ? c[i] / piv : 0.0;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / piv;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}

} // namespace

std::vector<double> solve_tridiagonal(const Stencil& A, const std::vector<double>& rhs) {
    const std::size_t n = A.size();
    if (rhs.size() != n) throw PreconditionError("solve_tridiagonal: size mismatch");
    if (!A.periodic) return thomas(A.lower, A.diag, A.upper, rhs);

    // Cyclic system: corners alpha = A(n-1, 0) = upper[n-1], beta = A(0, n-1) = lower[0].
    const double alpha = A.upper[n - 1];
    const double beta = A.lower[0];
    const double gamma = -A.diag[0];
    std::vector<double> b = A.diag;
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    std::vector<double> x = thomas(A.lower, b, A.upper, rhs);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    std::vector<double> z = thomas(A.lower, b, A.upper, u);
    const double denom = 1.0 + z[0] + beta * z[n - 1] / gamma;
    if (denom == 0.0 || !std::isfinite(denom)) throw SolverError("cyclic tridiagonal solve: singular correction");
    const double fact = (x[0] + beta * x[n - 1] / gamma) / denom;
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
    return x;
}

Stencil shifted_identity(const Stencil& L, double scale) {
    Stencil A = L;
    for (std::size_t i = 0; i < A.size(); ++i) {
        A.lower[i] *= scale;
        A.upper[i] *= scale;
        A.diag[i] = 1.0 + scale * A.diag[i];
    }
    return A;
}

} // namespace smms
