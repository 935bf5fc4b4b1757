#include "smms/wasserstein.hpp"

#include <algorithm>
#include <cmath>

namespace smms {

namespace {

// Piecewise-linear nondecreasing quantile function through (s[k], q[k]).
struct Quantile {
    std::vector<double> s;
    std::vector<double> q;

    // Linear piece containing the open interval (a, b), evaluated at both ends.
    // No breakpoint lies strictly inside (a, b); locating by the midpoint keeps
    // a rounded endpoint from selecting the neighbouring piece.
    std::pair<double, double> piece(double a, double b) const {
        const double mid = a + 0.5 * (b - a);
        std::size_t k = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), mid) - s.begin());
        k = std::clamp<std::size_t>(k, 1, s.size() - 1);
        while (k > 1 && !(s[k] > s[k - 1])) --k;
        const double s0 = s[k - 1], w = s[k] - s0, dq = q[k] - q[k - 1];
        return {q[k - 1] + dq * ((a - s0) / w), q[k - 1] + dq * ((b - s0) / w)};
    }
};

Quantile quantile_of(const ScalarField& f) {
    const WeightedSpace& sp = *f.space();
    const std::size_t n = sp.size();
    const double h = sp.h();
    const double start = sp.periodic() ? -0.5 * h : sp.lower();

    std::vector<double> mass(n);
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] < 0) {
            throw PreconditionError("wasserstein2_1d: negative density " + format_number(f[i]) + " at node " +
                                    std::to_string(i));
        }
        mass[i] = f[i] * sp.quad_weights()[i];
        total += mass[i];
    }
    if (!(total > 0)) throw PreconditionError("wasserstein2_1d: density has zero total mass");

    Quantile Q;
    std::size_t first = 0;
    while (mass[first] <= 0) ++first;
    Q.s.push_back(0.0);
    Q.q.push_back(start + static_cast<double>(first) * h);
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mass[i] <= 0) continue;
        const double left = start + static_cast<double>(i) * h;
        if (Q.q.back() != left) {
            // Jump across cells without mass.
            Q.s.push_back(Q.s.back());
            Q.q.push_back(left);
        }
        acc += mass[i];
        Q.s.push_back(std::min(1.0, acc / total));
        Q.q.push_back(left + h);
    }
    Q.s.back() = 1.0;
    return Q;
}

// Q extended by Q(s + 1) = Q(s) + period.
struct Shifted {
    const Quantile& Q;
    double period;
    double alpha;

    std::pair<double, double> piece(double a, double b) const {
        const double wa = a + alpha, wb = b + alpha;
        const double j = std::floor(wa + 0.5 * (wb - wa));
        auto [qa, qb] = Q.piece(wa - j, wb - j);
        return {qa + j * period, qb + j * period};
    }
};

template <class G>
double quantile_distance2(const Quantile& F, const G& g, const std::vector<double>& extra_breaks) {
    std::vector<double> br = F.s;
    br.insert(br.end(), extra_breaks.begin(), extra_breaks.end());
    std::sort(br.begin(), br.end());
    double acc = 0;
    for (std::size_t k = 1; k < br.size(); ++k) {
        const double a = br[k - 1], b = br[k];
        if (!(b > a)) continue;
        const auto [fa, fb] = F.piece(a, b);
        const auto [ga, gb] = g.piece(a, b);
        const double d0 = fa - ga, d1 = fb - gb;
        acc += (b - a) * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
    }
    return acc;
}

double circle_cost(const Quantile& F, const Quantile& G, double period, double alpha) {
    std::vector<double> extra;
    extra.reserve(G.s.size() * 2);
    for (int j = -2; j <= 2; ++j) {
        for (double s : G.s) {
            const double b = s + j - alpha;
            if (b > 0 && b < 1) extra.push_back(b);
        }
    }
    return quantile_distance2(F, Shifted{G, period, alpha}, extra);
}

} // namespace

double wasserstein2_1d(const ScalarField& f, const ScalarField& g) {
    require_same_space(f, g);
    const Quantile F = quantile_of(f);
    const Quantile G = quantile_of(g);
    if (!f.space()->periodic()) return std::sqrt(std::max(0.0, quantile_distance2(F, G, G.s)));

    // Minimise over the cut: coarse scan, then golden section on the best bracket.
    const double L = f.space()->length();
    const int scan = 64;
    double best_a = 0, best = circle_cost(F, G, L, 0.0);
    for (int j = -scan; j <= scan; ++j) {
        const double a = static_cast<double>(j) / scan;
        const double c = circle_cost(F, G, L, a);
        if (c < best) best = c, best_a = a;
    }
    double lo = best_a - 1.0 / scan, hi = best_a + 1.0 / scan;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double c1 = circle_cost(F, G, L, x1), c2 = circle_cost(F, G, L, x2);
    while (hi - lo > 1e-13) {
        if (c1 < c2) {
            hi = x2, x2 = x1, c2 = c1;
            x1 = hi - gr * (hi - lo);
            c1 = circle_cost(F, G, L, x1);
        } else {
            lo = x1, x1 = x2, c1 = c2;
            x2 = lo + gr * (hi - lo);
            c2 = circle_cost(F, G, L, x2);
        }
    }
    best = std::min({best, c1, c2});
    return std::sqrt(std::max(0.0, best));
}

InequalityReport wasserstein_contraction_check(const SpacePtr& space, const ScalarField& f, const ScalarField& g,
                                               double k, const FlowConfig& cfg) {
    if (f.space() != space || g.space() != space) {
        throw PreconditionError("wasserstein_contraction_check: fields live on a different space");
    }
    InequalityReport rep("wasserstein_contraction", 0.0);
    certify_cd(space, k, rep);
    rep.note("k", k);

    const double w0 = wasserstein2_1d(f, g);
    rep.note("w2_initial", w0);
    const SolutionHistory hf = heat_flow(space, f, cfg);
    const SolutionHistory hg = heat_flow(space, g, cfg);
    for (double t : cfg.check_times()) {
        const double wt = wasserstein2_1d(hf.at(t), hg.at(t));
        const double bound = std::exp(-k * t) * w0;
        rep.add("flow", kNotApplicable, t, wt, bound, flow_tolerance(*space, cfg, t) * w0 + 1e-14);
    }
    rep.finalize();
    return rep;
}

} // namespace smms
