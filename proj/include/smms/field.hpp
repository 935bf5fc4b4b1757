#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "smms/errors.hpp"
#include "smms/space.hpp"

namespace smms {

/// Values of a function on the nodes of one WeightedSpace.
class ScalarField {
public:
    ScalarField(SpacePtr space, std::vector<double> values);

    // Samples fn at every node.
    static ScalarField sample(SpacePtr space, const std::function<double(double)>& fn);
    static ScalarField constant(SpacePtr space, double c);

    const SpacePtr& space() const noexcept { return space_; }
    std::span<const double> values() const noexcept { return values_; }
    std::vector<double>& mutable_values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    double min() const;
    double max() const;

    // Pointwise transform, keeping the space.
    ScalarField map(const std::function<double(double)>& fn) const;

private:
    SpacePtr space_;
    std::vector<double> values_;
};

// Throws PreconditionError unless both fields live on the same space object.
void require_same_space(const ScalarField& a, const ScalarField& b);

// sum_i f_i * quad_weight_i
double integrate(const WeightedSpace& space, std::span<const double> f);
double integrate(const ScalarField& f);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);

} // namespace smms
