#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mvsde/measure.hpp"

namespace mvsde {

enum class W2Method { sorted_1d, exact_assignment, sliced };
std::string to_string(W2Method method);
W2Method w2_method_from_string(const std::string& text);

struct W2Options {
    std::size_t projections = 64;     // sliced
    std::uint64_t seed = 1;           // sliced
    std::size_t assignment_cap = 512; // exact_assignment
};

struct W2Result {
    double value = 0.0;
    double stderr_ = 0.0;      // Monte Carlo standard error, sliced only
    bool approximate = false;  // true for sliced
};

/// Wasserstein-2 distance between two uniform empirical measures.
///   sorted_1d         d = 1, monotone coupling
///   exact_assignment  any d, minimum-cost perfect matching on squared costs
///   sliced            root mean of 1D W2^2 over random unit projections
/// The exact methods need equal atom counts.
W2Result w2(const EmpiricalMeasure& a, const EmpiricalMeasure& b, W2Method method,
            const W2Options& options = {});

/// Minimum-cost perfect matching of a square cost matrix (row-major, n x n)
/// by shortest augmenting paths. Returns column assigned to each row.
std::vector<std::size_t> solve_assignment(const std::vector<double>& cost, std::size_t n);

/// Ordinary least squares of ln y on ln x.
struct RateFit {
    std::vector<std::pair<double, double>> points;  // (ln x, ln y)
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

RateFit fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// OLS of y on x, without logs.
RateFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace mvsde
