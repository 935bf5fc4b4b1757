#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "smms/stencil.hpp"

namespace smms {

enum class Boundary { Periodic, Neumann, Dirichlet };

struct Circle {
    double period;
};

struct Interval {
    double a;
    double b;
    Boundary boundary = Boundary::Neumann;
};

// Stand-in for the real line: [-half_width, half_width] with a Neumann cut.
struct TruncatedLine {
    double half_width;
};

using DomainKind = std::variant<Circle, Interval, TruncatedLine>;

std::string describe(const DomainKind& kind);

/// Closed-form weight phi together with its first two derivatives.
///
/// Weights are built from a registry id plus a flat parameter list so that
/// scenario files can name them. The measure is e^{-phi} dx.
class WeightSpec {
public:
    using Fn = std::function<double(double)>;

    WeightSpec(std::string id, std::vector<double> params, Fn phi, Fn d1, Fn d2);

    double operator()(double x) const { return phi_(x); }
    double d1(double x) const { return d1_(x); }
    double d2(double x) const { return d2_(x); }

    const std::string& id() const noexcept { return id_; }
    const std::vector<double>& params() const noexcept { return params_; }
    // True when phi is identically constant (the only weight admitted with m = 1).
    bool is_constant() const noexcept { return constant_; }

    static WeightSpec zero();
    // c (x - center)^2 / 2; c = 1, center = 0 is the Ornstein-Uhlenbeck weight.
    static WeightSpec quadratic(double c = 1.0, double center = 0.0);
    static WeightSpec linear(double slope);
    // sum_k coeffs[k] x^k
    static WeightSpec polynomial(std::vector<double> coeffs);
    // -(m - 1) log sin x, density sin^{m-1} x on (0, pi)
    static WeightSpec log_sin(double m);
    // -alpha log(1 - t) - beta log(1 + t), density (1-t)^alpha (1+t)^beta
    static WeightSpec jacobi(double alpha, double beta);
    // amp cos(freq x), a periodic weight for circles
    static WeightSpec cosine(double amp, double freq);

    struct RegistryEntry {
        std::string id;
        std::string params;
        std::string description;
    };
    static const std::vector<RegistryEntry>& registry();
    static WeightSpec from_registry(const std::string& id, const std::vector<double>& params);

private:
    std::string id_;
    std::vector<double> params_;
    Fn phi_;
    Fn d1_;
    Fn d2_;
    bool constant_ = false;
};

/// Discrete smooth metric measure space on a uniform 1-D grid.
///
/// Circles use nodes x_i = i h with the periodic trapezoid rule. Intervals
/// and truncated lines use cell-centred nodes x_i = a + (i + 1/2) h so that
/// the domain ends sit on cell faces; the quadrature mass of node i is
/// h e^{-phi(x_i)} (composite midpoint rule). Immutable after construction.
class WeightedSpace {
public:
    const DomainKind& kind() const noexcept { return kind_; }
    const WeightSpec& weight() const noexcept { return weight_; }
    Boundary boundary() const noexcept { return boundary_; }
    bool periodic() const noexcept { return boundary_ == Boundary::Periodic; }

    std::size_t size() const noexcept { return nodes_.size(); }
    double h() const noexcept { return h_; }
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    double length() const noexcept { return upper_ - lower_; }

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> quad_weights() const noexcept { return quad_; }
    std::span<const double> phi() const noexcept { return phi_; }
    // Sum of quadrature masses (1 when normalized).
    double total_mass() const noexcept { return total_mass_; }
    // Total mass before any normalization; the normalizing constant Z.
    double raw_mass() const noexcept { return raw_mass_; }
    bool normalized() const noexcept { return normalized_; }

    // Divergence-form phi-Laplacian e^{phi} (e^{-phi} u')' with boundary closure.
    const Stencil& laplacian() const noexcept { return laplacian_; }

    // Normalized density e^{-phi(x)} / Z of the continuous measure.
    double density(double x) const;

    // Signed distance respecting the circle's wrap-around.
    double distance(double x, double y) const;

    std::size_t interior_margin() const noexcept { return periodic() ? 0 : 2; }

private:
    friend std::shared_ptr<const WeightedSpace> build_space(DomainKind, WeightSpec, std::size_t, bool);
    friend std::shared_ptr<const WeightedSpace> normalize(const std::shared_ptr<const WeightedSpace>&);

    WeightedSpace(DomainKind kind, WeightSpec weight) : kind_(std::move(kind)), weight_(std::move(weight)) {}

    DomainKind kind_;
    WeightSpec weight_;
    Boundary boundary_ = Boundary::Periodic;
    double h_ = 0;
    double lower_ = 0;
    double upper_ = 0;
    std::vector<double> nodes_;
    std::vector<double> phi_;
    std::vector<double> quad_;
    double total_mass_ = 0;
    double raw_mass_ = 0;
    bool normalized_ = false;
    Stencil laplacian_;
};

using SpacePtr = std::shared_ptr<const WeightedSpace>;

// node_count >= 16; throws PreconditionError naming the node if phi is not finite.
SpacePtr build_space(DomainKind kind, WeightSpec weight, std::size_t node_count, bool normalize);

// Rescale masses to total 1. Returns the input unchanged if already normalized.
SpacePtr normalize(const SpacePtr& space);

// Builds the divergence-form stencil of  (1/rho) d/dx( a rho d/dx )  with
// rho = e^{-phi} and a given diffusivity a(x), evaluated at half nodes.
Stencil weighted_stencil(const WeightedSpace& space, const std::function<double(double)>& diffusivity);

/// Closed-form data of the n-dimensional model spaces.
class ModelSpace {
public:
    enum class Kind { Euclidean, Sphere, Gauss };

    static ModelSpace euclidean(int n);
    static ModelSpace sphere(int n);
    static ModelSpace gauss(int n);

    Kind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return n_; }

    // Isoperimetric profile; v is a volume (Euclidean) or a mass fraction.
    double profile(double v) const;

private:
    ModelSpace(Kind kind, int n) : kind_(kind), n_(n) {}
    Kind kind_;
    int n_;
};

// Volume of the unit n-ball from omega_0 = 1, omega_1 = 2, omega_n = 2 pi / n omega_{n-2}.
double unit_ball_volume(int n);

} // namespace smms
