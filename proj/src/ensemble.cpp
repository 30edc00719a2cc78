#include "mvsde/ensemble.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mvsde/rng.hpp"

namespace mvsde {

ParticleEnsemble::ParticleEnsemble(std::size_t count, std::size_t dim)
    : ParticleEnsemble(count, dim, std::vector<double>(count * dim, 0.0)) {}

ParticleEnsemble::ParticleEnsemble(std::size_t count, std::size_t dim, std::vector<double> states)
    : count_(count), dim_(dim), states_(std::move(states)) {
    require(dim_ >= 1 && dim_ <= kMaxDim, "ensemble: dimension out of range");
    require(states_.size() == count_ * dim_, "ensemble: state buffer has wrong size");
    refresh_overflow();
}

void ParticleEnsemble::refresh_overflow() {
    overflow_ = false;
    for (double v : states_)
        if (!std::isfinite(v)) {
            overflow_ = true;
            return;
        }
}

ParticleEnsemble ParticleEnsemble::prefix(std::size_t count) const {
    require(count <= count_, "ensemble: prefix longer than ensemble");
    ParticleEnsemble out(count, dim_,
                         std::vector<double>(states_.begin(), states_.begin() + count * dim_));
    out.t_index_ = t_index_;
    return out;
}

double empirical_moment(const ParticleEnsemble& ens, double p) {
    require(p >= 1.0, "empirical_moment: p must be >= 1");
    if (ens.overflowed()) return kExplosionSentinel;
    if (ens.size() == 0) return 0.0;
    std::vector<double> terms(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i)
        terms[i] = norm_power_from_squared(squared_norm(ens.particle(i)), p);
    return order_independent_sum(terms) / static_cast<double>(ens.size());
}

double w2_to_origin(const ParticleEnsemble& ens) {
    if (ens.overflowed()) return kExplosionSentinel;
    return std::sqrt(empirical_moment(ens, 2.0));
}

namespace {
std::string format_coordinate(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.16e}", v);
}
}  // namespace

void snapshot_csv(const ParticleEnsemble& ens, double time, std::ostream& sink) {
    sink << fmt::format("# t={} N={} d={}\n", time, ens.size(), ens.dim());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const ConstVec x = ens.particle(i);
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (k) sink << ',';
            sink << format_coordinate(x[k]);
        }
        sink << '\n';
    }
}

std::string to_string(InitialLaw::Kind kind) {
    switch (kind) {
        case InitialLaw::Kind::point: return "point";
        case InitialLaw::Kind::gaussian: return "gaussian";
        case InitialLaw::Kind::uniform_ball: return "uniform_ball";
    }
    return "gaussian";
}

InitialLaw::Kind initial_law_kind_from_string(const std::string& text) {
    if (text == "point") return InitialLaw::Kind::point;
    if (text == "gaussian") return InitialLaw::Kind::gaussian;
    if (text == "uniform_ball") return InitialLaw::Kind::uniform_ball;
    throw ContractViolation("unknown initial law '" + text + "'");
}

ParticleEnsemble sample_initial(const InitialLaw& law, std::size_t count, std::size_t dim,
                                std::uint64_t seed) {
    ParticleEnsemble ens(count, dim);
    for (std::size_t i = 0; i < count; ++i) {
        MutVec x = ens.particle(i);
        const auto particle = static_cast<std::uint32_t>(i);
        switch (law.kind) {
            case InitialLaw::Kind::point:
                for (double& c : x) c = law.mean;
                break;
            case InitialLaw::Kind::gaussian:
                for (std::size_t k = 0; k < dim; k += 2) {
                    const auto z = counter_normal_pair(seed, StreamDomain::initial_state, 0, particle,
                                                       static_cast<std::uint32_t>(k / 2));
                    x[k] = law.mean + law.spread * z[0];
                    if (k + 1 < dim) x[k + 1] = law.mean + law.spread * z[1];
                }
                break;
            case InitialLaw::Kind::uniform_ball: {
                // Gaussian direction, radius R U^{1/d}.
                for (std::size_t k = 0; k < dim; k += 2) {
                    const auto z = counter_normal_pair(seed, StreamDomain::initial_state, 0, particle,
                                                       static_cast<std::uint32_t>(k / 2));
                    x[k] = z[0];
                    if (k + 1 < dim) x[k + 1] = z[1];
                }
                const double r = norm(x);
                const double u = counter_uniforms(seed, StreamDomain::initial_state, 1, particle, 0)[0];
                const double radius = law.spread * std::pow(u, 1.0 / static_cast<double>(dim));
                for (double& c : x) c = law.mean + (r > 0.0 ? c / r * radius : 0.0);
                break;
            }
        }
    }
    return ens;
}

}  // namespace mvsde
