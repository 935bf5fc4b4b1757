#include "smms/fields.hpp"

#include "smms/kernels.hpp"

#include <algorithm>
#include <numbers>
#include <random>

namespace smms {

ScalarField::ScalarField(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw PreconditionError("ScalarField: null space");
    if (values_.size() != space_->size()) {
        throw PreconditionError("ScalarField: " + std::to_string(values_.size()) + " values for " +
                                std::to_string(space_->size()) + " nodes");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw PreconditionError("ScalarField: non-finite value at node " + std::to_string(i));
        }
    }
}

ScalarField ScalarField::sample(SpacePtr space, const std::function<double(double)>& fn) {
    std::vector<double> v;
    v.reserve(space->size());
    for (double x : space->nodes()) v.push_back(fn(x));
    return ScalarField(std::move(space), std::move(v));
}

ScalarField ScalarField::constant(SpacePtr space, double c) {
    const std::size_t n = space->size();
    return ScalarField(std::move(space), std::vector<double>(n, c));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField ScalarField::map(const std::function<double(double)>& fn) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), fn);
    return ScalarField(space_, std::move(v));
}

void require_same_space(const ScalarField& a, const ScalarField& b) {
    if (a.space() != b.space()) throw PreconditionError("fields live on different spaces");
}

double integrate(const WeightedSpace& space, std::span<const double> f) {
    if (f.size() != space.size()) {
        throw PreconditionError("integrate: field has " + std::to_string(f.size()) + " values, space has " +
                                std::to_string(space.size()) + " nodes");
    }
    return kernels::parallel::weighted_sum(space.quad_weights(), f);
}

double integrate(const ScalarField& f) { return integrate(*f.space(), f.values()); }

namespace {
template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
    require_same_space(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
    return ScalarField(a.space(), std::move(v));
}
} // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return zip(a, b, std::plus<>{}); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return zip(a, b, std::minus<>{}); }
ScalarField operator*(const ScalarField& a, const ScalarField& b) { return zip(a, b, std::multiplies<>{}); }
ScalarField operator*(double c, const ScalarField& a) {
    return a.map([c](double x) { return c * x; });
}

ScalarField random_bandlimited(const SpacePtr& space, std::uint64_t seed, int modes, double amplitude, double base,
                               double freq) {
    if (modes < 1) throw PreconditionError("random_bandlimited: modes must be >= 1");
    if (freq <= 0) freq = space->periodic() ? 2.0 * std::numbers::pi / space->length() : 0.5;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> amp(static_cast<std::size_t>(modes)), phase(static_cast<std::size_t>(modes));
    double total = 0;
    for (int k = 0; k < modes; ++k) {
        amp[k] = unit(rng) + 0.05;
        phase[k] = 2.0 * std::numbers::pi * unit(rng);
        total += amp[k];
    }
    for (double& a : amp) a *= amplitude / total;
    return ScalarField::sample(space, [&](double x) {
        double s = base;
        for (int k = 0; k < modes; ++k) s += amp[k] * std::sin((k + 1) * freq * x + phase[k]);
        return s;
    });
}

} // namespace smms
