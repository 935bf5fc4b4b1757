#include "smms/isoperimetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "smms/errors.hpp"
#include "smms/semigroup.hpp"

namespace smms {

// ---------------------------------------------------------------------------
// Gaussian

double gauss_pdf(double a) { return std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi); }

double gauss_cdf(double a) { return 0.5 * std::erfc(-a / std::numbers::sqrt2); }

double gauss_cdf_inv(double s) {
    if (!(s > 0 && s < 1)) throw PreconditionError("gauss_cdf_inv: s must lie in (0, 1)");
    if (s > 0.5) return -gauss_cdf_inv(1.0 - s);
    double lo = -12.0, hi = 0.0;
    if (s <= gauss_cdf(lo)) return lo;
    double x = -1.0;
    for (int it = 0; it < 200; ++it) {
        const double f = gauss_cdf(x) - s;
        if (f > 0) hi = x; else lo = x;
        double next = x - f / gauss_pdf(x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step < 1e-13 || hi - lo < 1e-13) break;
    }
    return x;
}

double gauss_profile(double v) {
    if (!(v >= 0 && v <= 1)) throw PreconditionError("gauss_profile: v must lie in [0, 1]");
    if (v == 0 || v == 1) return 0.0;
    return gauss_pdf(gauss_cdf_inv(std::min(v, 1.0 - v)));
}

// ---------------------------------------------------------------------------
// Model profiles

double euclidean_profile(int n, double v) {
    if (n < 2) throw PreconditionError("euclidean_profile: n must be >= 2");
    if (v < 0) throw PreconditionError("euclidean_profile: v must be >= 0");
    return n * std::pow(unit_ball_volume(n), 1.0 / n) * std::pow(v, 1.0 - 1.0 / n);
}

double sin_power_integral(int k, double theta) {
    if (k < 0) throw PreconditionError("sin_power_integral: k must be >= 0");
    const double s = std::sin(theta), c = std::cos(theta);
    double even = theta, odd = 1.0 - c;
    double cur = (k % 2 == 0) ? even : odd;
    for (int j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) {
        cur = -std::pow(s, j - 1) * c / j + (j - 1.0) / j * cur;
    }
    return cur;
}

double sphere_cap_angle(int n, double v) {
    if (n < 2) throw PreconditionError("sphere_cap_profile: n must be >= 2");
    if (!(v >= 0 && v <= 1)) throw PreconditionError("sphere_cap_profile: v must lie in [0, 1]");
    if (v == 0) return 0.0;
    if (v == 1) return std::numbers::pi;
    const int k = n - 1;
    const double total = sin_power_integral(k, std::numbers::pi);
    double lo = 0, hi = std::numbers::pi, th = std::numbers::pi * v;
    for (int it = 0; it < 200; ++it) {
        const double f = sin_power_integral(k, th) / total - v;
        if (f > 0) hi = th; else lo = th;
        const double d = std::pow(std::sin(th), k) / total;
        double next = d > 0 ? th - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - th);
        th = next;
        if (step < 1e-15 || hi - lo < 1e-15) break;
    }
    return th;
}

double sphere_cap_profile(int n, double v) {
    const double th = sphere_cap_angle(n, v);
    if (v == 0 || v == 1) return 0.0;
    return std::pow(std::sin(th), n - 1) / sin_power_integral(n - 1, std::numbers::pi);
}

double ModelSpace::profile(double v) const {
    switch (kind_) {
    case Kind::Euclidean: return euclidean_profile(n_, v);
    case Kind::Sphere: return sphere_cap_profile(n_, v);
    case Kind::Gauss: return gauss_profile(v);
    }
    return 0.0;
}

ProfileCurve sample_profile(const ModelSpace& model, int count, double v_max) {
    if (count < 2) throw PreconditionError("sample_profile: need at least 2 points");
    ProfileCurve c;
    const char* names[] = {"euclidean", "sphere", "gauss"};
    c.model = std::string(names[static_cast<int>(model.kind())]) + "_" + std::to_string(model.dimension());
    const double top = model.kind() == ModelSpace::Kind::Euclidean ? v_max : 1.0;
    for (int j = 0; j < count; ++j) {
        const double v = top * j / (count - 1.0);
        c.v.push_back(v);
        c.I.push_back(model.profile(v));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Interval unions

IntervalUnion::IntervalUnion(std::vector<std::pair<double, double>> intervals) {
    for (const auto& [a, b] : intervals) {
        if (std::isnan(a) || std::isnan(b) || !(a < b)) {
            throw PreconditionError("IntervalUnion: need a < b, got [" + format_number(a) + ", " + format_number(b) +
                                    "]");
        }
    }
    std::sort(intervals.begin(), intervals.end());
    for (const auto& iv : intervals) {
        if (!parts_.empty() && iv.first <= parts_.back().second) {
            parts_.back().second = std::max(parts_.back().second, iv.second);
        } else {
            parts_.push_back(iv);
        }
    }
}

double IntervalUnion::length() const {
    double s = 0;
    for (const auto& [a, b] : parts_) s += b - a;
    return s;
}

IntervalUnion IntervalUnion::minkowski_sum(const IntervalUnion& other) const {
    std::vector<std::pair<double, double>> sums;
    for (const auto& [a, b] : parts_) {
        for (const auto& [c, d] : other.parts_) sums.emplace_back(a + c, b + d);
    }
    return IntervalUnion(std::move(sums));
}

namespace {

constexpr int kGaussPoints = 20;

struct GaussLegendre {
    std::array<double, kGaussPoints> x{};
    std::array<double, kGaussPoints> w{};

    GaussLegendre() {
        const int n = kGaussPoints;
        for (int i = 0; i < n; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const GaussLegendre& gauss_legendre() {
    static const GaussLegendre gl;
    return gl;
}

double density_integral(const WeightedSpace& s, double a, double b) {
    if (!(b > a)) return 0.0;
    const GaussLegendre& gl = gauss_legendre();
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 0.25)));
    const double w = (b - a) / pieces;
    double acc = 0;
    for (int j = 0; j < pieces; ++j) {
        const double c = a + (j + 0.5) * w;
        double part = 0;
        for (int i = 0; i < kGaussPoints; ++i) part += gl.w[i] * s.density(c + 0.5 * w * gl.x[i]);
        acc += 0.5 * w * part;
    }
    return acc;
}

// Finite endpoints of A that are boundary points inside the domain.
std::vector<double> boundary_points(const WeightedSpace& s, const IntervalUnion& A) {
    std::vector<double> pts;
    for (const auto& [a, b] : A.intervals()) {
        for (double e : {a, b}) {
            if (!std::isfinite(e)) continue;
            if (!s.periodic() && (e <= s.lower() || e >= s.upper())) continue;
            pts.push_back(e);
        }
    }
    if (s.periodic() && A.intervals().size() >= 1) {
        // An arc covering the whole circle has no boundary.
        if (A.length() >= s.length()) pts.clear();
    }
    return pts;
}

// mu(A_eps) - mu(A): strips outside each boundary point, clipped by the gaps.
double dilation_excess(const WeightedSpace& s, const IntervalUnion& A, double eps) {
    const auto& p = A.intervals();
    double acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double a = p[i].first, b = p[i].second;
        if (std::isfinite(a)) {
            const double prev = i > 0 ? p[i - 1].second : -IntervalUnion::kInf;
            const double gap = a - prev;
            const double reach = std::min(eps, 0.5 * gap);
            acc += density_integral(s, a - reach, a);
        }
        if (std::isfinite(b)) {
            const double next = i + 1 < p.size() ? p[i + 1].first : IntervalUnion::kInf;
            const double reach = std::min(eps, 0.5 * (next - b));
            acc += density_integral(s, b, b + reach);
        }
    }
    return acc;
}

} // namespace

double measure(const WeightedSpace& space, const IntervalUnion& A) {
    double acc = 0;
    for (const auto& [a, b] : A.intervals()) {
        const double lo = space.periodic() ? a : std::max(a, space.lower());
        const double hi = space.periodic() ? b : std::min(b, space.upper());
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw PreconditionError("measure: unbounded arc on a circle");
        acc += density_integral(space, lo, hi);
    }
    return acc;
}

double minkowski_content_1d(const WeightedSpace& space, const IntervalUnion& A, MinkowskiMode mode) {
    if (A.empty()) return 0.0;
    const std::vector<double> pts = boundary_points(space, A);
    if (mode == MinkowskiMode::Analytic) {
        double acc = 0;
        for (double x : pts) acc += space.density(x);
        return acc;
    }
    const std::array<double, 3> eps = {1e-2, 5e-3, 2.5e-3};
    if (!space.periodic()) {
        for (const auto& [a, b] : A.intervals()) {
            for (double e : {a, b}) {
                if (std::isfinite(e) && (e - eps[0] <= space.lower() || e + eps[0] >= space.upper())) {
                    throw PreconditionError("minkowski_content_1d: set touches the domain boundary");
                }
            }
        }
    } else if (pts.empty()) {
        return 0.0;
    }
    std::array<double, 3> d{};
    for (int j = 0; j < 3; ++j) d[j] = dilation_excess(space, A, eps[j]) / eps[j];
    const double r1 = 2.0 * d[1] - d[0];
    const double r2 = 2.0 * d[2] - d[1];
    return (4.0 * r2 - r1) / 3.0;
}

double gaussian_measure(const IntervalUnion& A) {
    double acc = 0;
    for (const auto& [a, b] : A.intervals()) {
        // Difference of tails on the side where cancellation is smaller.
        acc += (a >= 0) ? gauss_cdf(-a) - gauss_cdf(-b) : gauss_cdf(b) - gauss_cdf(a);
    }
    return acc;
}

double gaussian_perimeter(const IntervalUnion& A) {
    double acc = 0;
    for (const auto& [a, b] : A.intervals()) {
        if (std::isfinite(a)) acc += gauss_pdf(a);
        if (std::isfinite(b)) acc += gauss_pdf(b);
    }
    return acc;
}

InequalityReport gaussian_iso_check(const IntervalUnion& A) {
    if (A.empty()) throw PreconditionError("gaussian_iso_check: empty set");
    InequalityReport rep("gaussian_isoperimetry", 1e-8);
    const double mass = gaussian_measure(A);
    rep.note("measure", mass);
    rep.add("set", kNotApplicable, kNotApplicable, gauss_profile(std::clamp(mass, 0.0, 1.0)), gaussian_perimeter(A));
    rep.finalize();
    return rep;
}

InequalityReport cd_iso_check(const SpacePtr& space, double k, const IntervalUnion& A) {
    if (!(k > 0)) throw PreconditionError("cd_iso_check: k must be > 0");
    if (!space->normalized()) throw PreconditionError("cd_iso_check: space must be normalized");
    if (A.empty()) throw PreconditionError("cd_iso_check: empty set");
    InequalityReport rep("cd_isoperimetry", 1e-8);
    certify_cd(space, k, rep);
    rep.note("dimension_scope", "1-D weighted spaces only");
    const double mass = measure(*space, A);
    rep.note("measure", mass);
    const double per = minkowski_content_1d(*space, A, MinkowskiMode::Analytic);
    rep.add("set", kNotApplicable, kNotApplicable, std::sqrt(k) * gauss_profile(std::clamp(mass, 0.0, 1.0)), per);
    rep.finalize();
    return rep;
}

InequalityReport brunn_minkowski_check(const Box& A, const Box& B) {
    if (A.sides.empty() || A.sides.size() != B.sides.size()) {
        throw PreconditionError("brunn_minkowski_check: boxes need the same positive dimension");
    }
    const std::size_t n = A.sides.size();
    double va = 1, vb = 1, vs = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(A.sides[i] > 0 && B.sides[i] > 0)) throw PreconditionError("brunn_minkowski_check: empty box");
        va *= A.sides[i];
        vb *= B.sides[i];
        vs *= A.sides[i] + B.sides[i];
    }
    const double e = 1.0 / static_cast<double>(n);
    const double lhs = std::pow(va, e) + std::pow(vb, e), rhs = std::pow(vs, e);
    InequalityReport rep("brunn_minkowski_boxes", 1e-12 * rhs);
    rep.note("dimension", static_cast<double>(n));
    rep.note("volume_sum", vs);
    rep.add("boxes", kNotApplicable, kNotApplicable, lhs, rhs);
    rep.finalize();
    return rep;
}

InequalityReport brunn_minkowski_check(const IntervalUnion& A, const IntervalUnion& B) {
    if (A.empty() || B.empty()) throw PreconditionError("brunn_minkowski_check: empty set");
    const double la = A.length(), lb = B.length();
    if (!std::isfinite(la) || !std::isfinite(lb)) throw PreconditionError("brunn_minkowski_check: unbounded set");
    const IntervalUnion S = A.minkowski_sum(B);
    const double ls = S.length();
    InequalityReport rep("brunn_minkowski_1d", 1e-12 * ls);
    rep.note("volume_sum", ls);
    rep.add("intervals", kNotApplicable, kNotApplicable, la + lb, ls);
    rep.finalize();
    return rep;
}

} // namespace smms
