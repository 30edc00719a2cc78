#include "mvsde/taming.hpp"

#include <cmath>

namespace mvsde {

std::string to_string(TamingVariant variant) {
    switch (variant) {
        case TamingVariant::finite: return "finite";
        case TamingVariant::ergodic: return "ergodic";
        case TamingVariant::strong_order_candidate: return "strong_order_candidate";
        case TamingVariant::off: return "off";
    }
    return "off";
}

TamingVariant taming_variant_from_string(const std::string& text) {
    if (text == "finite") return TamingVariant::finite;
    if (text == "ergodic") return TamingVariant::ergodic;
    if (text == "strong_order_candidate") return TamingVariant::strong_order_candidate;
    if (text == "off") return TamingVariant::off;
    throw ContractViolation("unknown taming variant '" + text + "'");
}

TamedModel::TamedModel(ModelPtr base, std::size_t n, TamingVariant variant)
    : base_(std::move(base)), n_(n), variant_(variant) {
    require(base_ != nullptr, "tamed model: base model is null");
    require(n_ >= 1, "tamed model: taming level n must be >= 1");
    const double nn = static_cast<double>(n_);
    const double q = base_->q();
    switch (variant_) {
        case TamingVariant::finite:
            coefficient_ = 1.0 / std::sqrt(nn);
            exponent_ = 2.0 * q;
            break;
        case TamingVariant::ergodic:
            coefficient_ = 1.0 / std::sqrt(nn);
            exponent_ = q;
            break;
        case TamingVariant::strong_order_candidate:
            coefficient_ = 1.0 / nn;
            exponent_ = 4.0 * q;
            break;
        case TamingVariant::off:
            coefficient_ = 0.0;
            exponent_ = 0.0;
            break;
    }
}

double TamedModel::denominator(double squared_norm) const {
    if (variant_ == TamingVariant::off) return 1.0;
    return 1.0 + coefficient_ * norm_power_from_squared(squared_norm, exponent_);
}

void TamedModel::drift(double t, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const {
    base_->drift(t, x, mu, out);
    const double den = denominator(squared_norm(x));
    for (double& v : out) v /= den;
}

void TamedModel::diffusion(double t, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const {
    base_->diffusion(t, x, mu, out);
    const double den = denominator(squared_norm(x));
    for (double& v : out) v /= den;
}

void TamedModel::kernel_f(ConstVec x, ConstVec y, MutVec out) const {
    base_->kernel_f(x, y, out);
    const double den = denominator(squared_distance(x, y));
    for (double& v : out) v /= den;
}

void TamedModel::kernel_g(ConstVec x, ConstVec y, MutVec out) const {
    base_->kernel_g(x, y, out);
    const double den = denominator(squared_distance(x, y));
    for (double& v : out) v /= den;
}

void TamedModel::kernels(ConstVec x, ConstVec y, MutVec f_out, MutVec g_out) const {
    const double den = denominator(squared_distance(x, y));
    base_->kernel_f(x, y, f_out);
    for (double& v : f_out) v /= den;
    base_->kernel_g(x, y, g_out);
    for (double& v : g_out) v /= den;
}

}  // namespace mvsde
