#pragma once

#include <string>

#include "mvsde/model.hpp"

namespace mvsde {

/// Denominator used to tame the coefficients at level n:
///   finite                 1 + n^{-1/2} |z|^{2q}
///   ergodic                1 + n^{-1/2} |z|^{q}
///   strong_order_candidate 1 + n^{-1}   |z|^{4q}   (constant-noise variant)
///   off                    1
/// with z = x for (b, sigma) and z = x - y for (f, g).
enum class TamingVariant { finite, ergodic, strong_order_candidate, off };

std::string to_string(TamingVariant variant);
TamingVariant taming_variant_from_string(const std::string& text);

/// A coefficient model seen through a taming variant at level n = 1/h.
class TamedModel {
public:
    TamedModel(ModelPtr base, std::size_t n, TamingVariant variant);

    const CoefficientModel& base() const { return *base_; }
    const ModelPtr& base_ptr() const { return base_; }
    std::size_t n() const { return n_; }
    TamingVariant variant() const { return variant_; }

    /// Taming denominator given |z|^2.
    double denominator(double squared_norm) const;

    void drift(double t, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const;
    void diffusion(double t, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const;
    void kernel_f(ConstVec x, ConstVec y, MutVec out) const;
    void kernel_g(ConstVec x, ConstVec y, MutVec out) const;

    /// Both tamed kernels at once, sharing the |x - y| denominator.
    void kernels(ConstVec x, ConstVec y, MutVec f_out, MutVec g_out) const;

private:
    ModelPtr base_;
    std::size_t n_;
    TamingVariant variant_;
    double coefficient_;  // n^{-1/2} or n^{-1}
    double exponent_;     // power applied to |z|
};

}  // namespace mvsde
