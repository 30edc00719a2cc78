#include "mvsde/measure.hpp"

#include <algorithm>
#include <vector>

namespace mvsde {

double order_independent_sum(std::span<double> scratch) {
    std::sort(scratch.begin(), scratch.end());
    double s = 0.0;
    for (double v : scratch) s += v;
    return s;
}

EmpiricalMeasure::EmpiricalMeasure(std::span<const double> states, std::size_t dim)
    : states_(states), dim_(dim), count_(dim == 0 ? 0 : states.size() / dim) {
    require(dim >= 1 && dim <= kMaxDim, "empirical measure: dimension out of range");
    require(states.size() % dim == 0, "empirical measure: state buffer is not a multiple of d");
    if (count_ == 0) return;

    std::vector<double> scratch(count_);
    for (std::size_t k = 0; k < dim_; ++k) {
        for (std::size_t j = 0; j < count_; ++j) scratch[j] = states_[j * dim_ + k];
        mean_[k] = order_independent_sum(scratch) / static_cast<double>(count_);
    }
    for (std::size_t j = 0; j < count_; ++j) scratch[j] = squared_norm(atom(j));
    second_moment_ = order_independent_sum(scratch) / static_cast<double>(count_);
}

}  // namespace mvsde
