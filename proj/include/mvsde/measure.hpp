#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "mvsde/common.hpp"

namespace mvsde {

/// Sum of values in ascending order of value. The result does not depend on
/// the order the values arrive in, which keeps ensemble statistics invariant
/// under particle relabelling.
double order_independent_sum(std::span<double> scratch);

/// Uniformly weighted empirical measure over N atoms in R^d, viewed in place.
/// The atom mean is computed once at construction.
class EmpiricalMeasure {
public:
    EmpiricalMeasure(std::span<const double> states, std::size_t dim);

    std::size_t size() const { return count_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return count_ == 0; }

    ConstVec atom(std::size_t j) const { return states_.subspan(j * dim_, dim_); }
    ConstVec mean() const { return ConstVec(mean_.data(), dim_); }
    /// W2(mu, delta_0)^2, i.e. the mean squared norm of the atoms.
    double second_moment() const { return second_moment_; }
    std::span<const double> raw() const { return states_; }

private:
    std::span<const double> states_;
    std::size_t dim_;
    std::size_t count_;
    std::array<double, kMaxDim> mean_{};
    double second_moment_ = 0.0;
};

}  // namespace mvsde
