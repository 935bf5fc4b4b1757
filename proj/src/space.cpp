#include "smms/space.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "smms/errors.hpp"

namespace smms {

namespace {

std::string fmt_num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

double param(const std::vector<double>& p, std::size_t i, double fallback) {
    return i < p.size() ? p[i] : fallback;
}

} // namespace

std::string describe(const DomainKind& kind) {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Circle>) {
                return "circle(L=" + fmt_num(k.period) + ")";
            } else if constexpr (std::is_same_v<K, Interval>) {
                return "interval(" + fmt_num(k.a) + "," + fmt_num(k.b) + "," +
                       (k.boundary == Boundary::Dirichlet ? "dirichlet" : "neumann") + ")";
            } else {
                return "truncated_line(A=" + fmt_num(k.half_width) + ")";
            }
        },
        kind);
}

// ---------------------------------------------------------------------------
// WeightSpec

WeightSpec::WeightSpec(std::string id, std::vector<double> params, Fn phi, Fn d1, Fn d2)
    : id_(std::move(id)), params_(std::move(params)), phi_(std::move(phi)), d1_(std::move(d1)),
      d2_(std::move(d2)) {}

WeightSpec WeightSpec::zero() {
    auto z = [](double) { return 0.0; };
    WeightSpec w("zero", {}, z, z, z);
    w.constant_ = true;
    return w;
}

WeightSpec WeightSpec::quadratic(double c, double center) {
    return WeightSpec(
        "quadratic", {c, center}, [=](double x) { return 0.5 * c * (x - center) * (x - center); },
        [=](double x) { return c * (x - center); }, [=](double) { return c; });
}

WeightSpec WeightSpec::linear(double slope) {
    WeightSpec w(
        "linear", {slope}, [=](double x) { return slope * x; }, [=](double) { return slope; },
        [](double) { return 0.0; });
    w.constant_ = slope == 0.0;
    return w;
}

WeightSpec WeightSpec::polynomial(std::vector<double> coeffs) {
    auto eval = [](const std::vector<double>& c, double x) {
        double acc = 0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
        return acc;
    };
    std::vector<double> c1, c2;
    for (std::size_t k = 1; k < coeffs.size(); ++k) c1.push_back(static_cast<double>(k) * coeffs[k]);
    for (std::size_t k = 1; k < c1.size(); ++k) c2.push_back(static_cast<double>(k) * c1[k]);
    bool constant = true;
    for (std::size_t k = 1; k < coeffs.size(); ++k) constant = constant && coeffs[k] == 0.0;
    WeightSpec w(
        "polynomial", coeffs, [=](double x) { return eval(coeffs, x); },
        [=](double x) { return eval(c1, x); }, [=](double x) { return eval(c2, x); });
    w.constant_ = constant;
    return w;
}

WeightSpec WeightSpec::log_sin(double m) {
    const double s = m - 1.0;
    return WeightSpec(
        "log_sin", {m}, [=](double x) { return -s * std::log(std::sin(x)); },
        [=](double x) { return -s * std::cos(x) / std::sin(x); },
        [=](double x) {
            const double sn = std::sin(x);
            return s / (sn * sn);
        });
}

WeightSpec WeightSpec::jacobi(double alpha, double beta) {
    return WeightSpec(
        "jacobi", {alpha, beta},
        [=](double t) { return -alpha * std::log1p(-t) - beta * std::log1p(t); },
        [=](double t) { return alpha / (1.0 - t) - beta / (1.0 + t); },
        [=](double t) { return alpha / ((1.0 - t) * (1.0 - t)) + beta / ((1.0 + t) * (1.0 + t)); });
}

WeightSpec WeightSpec::cosine(double amp, double freq) {
    WeightSpec w(
        "cosine", {amp, freq}, [=](double x) { return amp * std::cos(freq * x); },
        [=](double x) { return -amp * freq * std::sin(freq * x); },
        [=](double x) { return -amp * freq * freq * std::cos(freq * x); });
    w.constant_ = amp == 0.0 || freq == 0.0;
    return w;
}

const std::vector<WeightSpec::RegistryEntry>& WeightSpec::registry() {
    static const std::vector<RegistryEntry> entries = {
        {"zero", "", "phi = 0 (Riemannian measure)"},
        {"quadratic", "c=1 center=0", "phi = c (x - center)^2 / 2 (Ornstein-Uhlenbeck for c = 1)"},
        {"linear", "slope", "phi = slope * x"},
        {"polynomial", "c0 c1 c2 ...", "phi = sum_k c_k x^k"},
        {"log_sin", "m", "phi = -(m-1) log sin x, density sin^{m-1} x on (0, pi)"},
        {"jacobi", "alpha beta", "phi = -alpha log(1-t) - beta log(1+t)"},
        {"cosine", "amp freq", "phi = amp cos(freq x)"},
    };
    return entries;
}

WeightSpec WeightSpec::from_registry(const std::string& id, const std::vector<double>& p) {
    if (id == "zero") return zero();
    if (id == "quadratic") return quadratic(param(p, 0, 1.0), param(p, 1, 0.0));
    if (id == "linear") return linear(param(p, 0, 1.0));
    if (id == "polynomial") return polynomial(p);
    if (id == "log_sin") return log_sin(param(p, 0, 2.0));
    if (id == "jacobi") {
        const double a = param(p, 0, 0.0), b = param(p, 1, 0.0);
        if (a <= -1 || b <= -1) throw PreconditionError("jacobi weight requires alpha, beta > -1");
        return jacobi(a, b);
    }
    if (id == "cosine") return cosine(param(p, 0, 1.0), param(p, 1, 1.0));
    throw ParseError("unknown weight registry id '" + id + "'");
}

// ---------------------------------------------------------------------------
// WeightedSpace

double WeightedSpace::density(double x) const {
    const double z = normalized_ ? raw_mass_ : 1.0;
    return std::exp(-weight_(x)) / z;
}

double WeightedSpace::distance(double x, double y) const {
    double d = y - x;
    if (periodic()) {
        const double L = length();
        d = std::remainder(d, L);
    }
    return d;
}

Stencil weighted_stencil(const WeightedSpace& space, const std::function<double(double)>& diffusivity) {
    const std::size_t n = space.size();
    const double h = space.h();
    const double ih2 = 1.0 / (h * h);
    const auto x = space.nodes();
    const auto phi = space.phi();
    const WeightSpec& w = space.weight();

    Stencil L;
    L.periodic = space.periodic();
    L.lower.assign(n, 0.0);
    L.upper.assign(n, 0.0);
    L.diag.assign(n, 0.0);

    // Face coefficient between node i and i+1: a(x_{i+1/2}) e^{phi_i - phi_{i+1/2}} / h^2.
    for (std::size_t i = 0; i < n; ++i) {
        const bool last = i + 1 == n;
        if (!last || L.periodic) {
            const double xf = x[i] + 0.5 * h;
            const double pf = w(xf);
            const double af = diffusivity(xf);
            const std::size_t j = last ? 0 : i + 1;
            L.upper[i] = af * std::exp(phi[i] - pf) * ih2;
            L.lower[j] = af * std::exp(phi[j] - pf) * ih2;
        }
    }
    for (std::size_t i = 0; i < n; ++i) L.diag[i] = -(L.lower[i] + L.upper[i]);

    if (space.boundary() == Boundary::Dirichlet) {
        // u = 0 on the end faces, which sit h/2 from the first and last node.
        const double fa = space.lower(), fb = space.upper();
        L.diag[0] -= 2.0 * diffusivity(fa) * std::exp(phi[0] - w(fa)) * ih2;
        L.diag[n - 1] -= 2.0 * diffusivity(fb) * std::exp(phi[n - 1] - w(fb)) * ih2;
    }
    return L;
}

SpacePtr build_space(DomainKind kind, WeightSpec weight, std::size_t node_count, bool normalize_mass) {
    if (node_count < 16) throw PreconditionError("build_space: node_count must be >= 16");

    std::shared_ptr<WeightedSpace> s(new WeightedSpace(kind, std::move(weight)));
    const double n = static_cast<double>(node_count);
    bool cell_centred = true;

    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Circle>) {
                if (!(k.period > 0)) throw PreconditionError("circle: period must be > 0");
                s->boundary_ = Boundary::Periodic;
                s->lower_ = 0.0;
                s->upper_ = k.period;
                cell_centred = false;
            } else if constexpr (std::is_same_v<K, Interval>) {
                if (!(k.a < k.b)) throw PreconditionError("interval: require a < b");
                s->boundary_ = k.boundary == Boundary::Dirichlet ? Boundary::Dirichlet : Boundary::Neumann;
                s->lower_ = k.a;
                s->upper_ = k.b;
            } else {
                if (!(k.half_width > 0)) throw PreconditionError("truncated line: half-width must be > 0");
                s->boundary_ = Boundary::Neumann;
                s->lower_ = -k.half_width;
                s->upper_ = k.half_width;
            }
        },
        kind);

    s->h_ = (s->upper_ - s->lower_) / n;
    s->nodes_.resize(node_count);
    s->phi_.resize(node_count);
    s->quad_.resize(node_count);
    const double offset = cell_centred ? 0.5 : 0.0;
    for (std::size_t i = 0; i < node_count; ++i) {
        const double x = s->lower_ + (static_cast<double>(i) + offset) * s->h_;
        const double p = s->weight_(x);
        if (!std::isfinite(p)) {
            throw PreconditionError("build_space: weight '" + s->weight_.id() + "' is not finite at node " +
                                    std::to_string(i) + " (x = " + fmt_num(x) + ")");
        }
        s->nodes_[i] = x;
        s->phi_[i] = p;
        s->quad_[i] = s->h_ * std::exp(-p);
    }
    double total = 0;
    for (double q : s->quad_) total += q;
    s->raw_mass_ = total;
    s->total_mass_ = total;
    s->laplacian_ = weighted_stencil(*s, [](double) { return 1.0; });

    SpacePtr out = s;
    return normalize_mass ? normalize(out) : out;
}

SpacePtr normalize(const SpacePtr& space) {
    if (space->normalized_) return space;
    std::shared_ptr<WeightedSpace> s(new WeightedSpace(*space));
    const double z = s->raw_mass_;
    for (double& q : s->quad_) q /= z;
    double total = 0;
    for (double q : s->quad_) total += q;
    s->total_mass_ = total;
    s->normalized_ = true;
    return s;
}

// ---------------------------------------------------------------------------
// ModelSpace

double unit_ball_volume(int n) {
    if (n < 0) throw PreconditionError("unit_ball_volume: n must be >= 0");
    double even = 1.0, odd = 2.0;
    if (n == 0) return even;
    if (n == 1) return odd;
    double w = (n % 2 == 0) ? even : odd;
    for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) w *= 2.0 * std::numbers::pi / k;
    return w;
}

ModelSpace ModelSpace::euclidean(int n) {
    if (n < 2) throw PreconditionError("Euclidean model space requires n >= 2");
    return ModelSpace(Kind::Euclidean, n);
}

ModelSpace ModelSpace::sphere(int n) {
    if (n < 2) throw PreconditionError("sphere model space requires n >= 2");
    return ModelSpace(Kind::Sphere, n);
}

ModelSpace ModelSpace::gauss(int n) {
    if (n < 1) throw PreconditionError("Gauss model space requires n >= 1");
    return ModelSpace(Kind::Gauss, n);
}

} // namespace smms
