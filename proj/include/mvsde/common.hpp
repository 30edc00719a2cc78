#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace mvsde {

/// Largest supported state or noise dimension. Coefficient evaluation works on
/// stack buffers of this size so the O(N^2) interaction loops never allocate.
inline constexpr std::size_t kMaxDim = 8;

/// Caller broke an operation's precondition (dimension mismatch, bad level...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A requested tableau or cost matrix would exceed the configured memory cap.
class ResourceLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ContractViolation(message);
}

using ConstVec = std::span<const double>;
using MutVec = std::span<double>;

inline double squared_norm(ConstVec v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return s;
}

inline double norm(ConstVec v) { return std::sqrt(squared_norm(v)); }

inline double dot(ConstVec a, ConstVec b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

/// |x - y|^2 computed from the componentwise differences, so the value is
/// bitwise symmetric in (x, y).
inline double squared_distance(ConstVec a, ConstVec b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

/// (|v|^2)^(e/2) for a growth exponent e, with exact repeated multiplication
/// for small even integer exponents (the common q = 1, 2 cases).
inline double norm_power_from_squared(double squared, double exponent) {
    const double half = 0.5 * exponent;
    if (half == std::floor(half) && half >= 0.0 && half <= 8.0) {
        double r = 1.0;
        for (int k = 0; k < static_cast<int>(half); ++k) r *= squared;
        return r;
    }
    return std::pow(squared, half);
}

}  // namespace mvsde
