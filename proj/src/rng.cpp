#include "mvsde/rng.hpp"

#include <cmath>
#include <numbers>

namespace mvsde {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Increment quantum 2^-36: with |W| < 2^16 every partial sum stays exact.
constexpr double kQuantum = 1.0 / 68719476736.0;
constexpr double kInvQuantum = 68719476736.0;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

std::array<std::uint32_t, 4> counter_block(std::uint64_t seed, StreamDomain domain, std::uint64_t index,
                                           std::uint32_t particle, std::uint32_t slot) {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), particle,
        (static_cast<std::uint32_t>(domain) << 24) | (slot & 0x00FFFFFFu)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    return philox4x32(counter, key);
}

// 53-bit uniform in (0, 1].
inline double to_unit(std::uint32_t high, std::uint32_t low) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(high >> 5) << 26) | (low >> 6);
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

std::array<double, 2> counter_normal_pair(std::uint64_t seed, StreamDomain domain, std::uint64_t index,
                                          std::uint32_t particle, std::uint32_t slot) {
    const auto block = counter_block(seed, domain, index, particle, slot);
    const double u1 = to_unit(block[0], block[1]);
    const double u2 = to_unit(block[2], block[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::array<double, 4> counter_uniforms(std::uint64_t seed, StreamDomain domain, std::uint64_t index,
                                       std::uint32_t particle, std::uint32_t slot) {
    const auto a = counter_block(seed, domain, index, particle, 2 * slot);
    const auto b = counter_block(seed, domain, index, particle, 2 * slot + 1);
    return {to_unit(a[0], a[1]), to_unit(a[2], a[3]), to_unit(b[0], b[1]), to_unit(b[2], b[3])};
}

std::size_t steps_for(double horizon, std::size_t n) {
    require(horizon > 0.0 && std::isfinite(horizon), "time grid: T must be positive");
    require(n >= 1, "time grid: n must be >= 1");
    const double exact = horizon * static_cast<double>(n);
    const double rounded = std::round(exact);
    require(std::abs(exact - rounded) <= 1e-9 * std::max(1.0, exact) && rounded >= 1.0,
            "time grid: T = " + std::to_string(horizon) + " is not a multiple of h = 1/" +
                std::to_string(n));
    return static_cast<std::size_t>(rounded);
}

BrownianTableau::BrownianTableau(std::uint64_t seed, std::size_t particles, std::size_t noise_dim,
                                 double horizon, std::size_t n_max, Options options)
    : seed_(seed),
      particles_(particles),
      noise_dim_(noise_dim),
      horizon_(horizon),
      n_max_(n_max),
      finest_steps_(steps_for(horizon, n_max)),
      scale_(std::sqrt(1.0 / static_cast<double>(n_max))) {
    require(particles_ >= 1, "tableau: need at least one particle");
    require(noise_dim_ >= 1 && noise_dim_ <= kMaxDim, "tableau: noise dimension out of range");

    const double cells = static_cast<double>(finest_steps_) * static_cast<double>(particles_) *
                         static_cast<double>(noise_dim_);
    const double bytes = cells * sizeof(double);
    const bool fits = bytes <= static_cast<double>(options.memory_cap_bytes);
    if (options.policy == Policy::store && !fits)
        throw ResourceLimitExceeded("tableau: " + std::to_string(static_cast<long long>(bytes)) +
                                    " bytes exceed the memory cap and regeneration is disabled");
    if (options.policy == Policy::regenerate || !fits) return;

    storage_.resize(finest_steps_ * particles_ * noise_dim_);
    for (std::size_t k = 0; k < finest_steps_; ++k)
        for (std::size_t i = 0; i < particles_; ++i)
            for (std::size_t c = 0; c < noise_dim_; ++c)
                storage_[(k * particles_ + i) * noise_dim_ + c] = generate(i, c, k);
}

double BrownianTableau::generate(std::size_t particle, std::size_t component, std::size_t step) const {
    const auto pair = counter_normal_pair(seed_, StreamDomain::brownian, step,
                                          static_cast<std::uint32_t>(particle),
                                          static_cast<std::uint32_t>(component / 2));
    const double z = pair[component % 2];
    return std::nearbyint(z * scale_ * kInvQuantum) * kQuantum;
}

double BrownianTableau::finest(std::size_t particle, std::size_t component, std::size_t step) const {
    require(particle < particles_ && component < noise_dim_ && step < finest_steps_,
            "tableau: index out of range");
    if (!storage_.empty()) return storage_[(step * particles_ + particle) * noise_dim_ + component];
    return generate(particle, component, step);
}

void BrownianTableau::increment(std::size_t level, std::size_t particle, std::size_t step,
                                MutVec out) const {
    require(level >= 1 && n_max_ % level == 0,
            "tableau: level " + std::to_string(level) + " does not divide n_max " + std::to_string(n_max_));
    require(out.size() == noise_dim_, "tableau: output has wrong noise dimension");
    const std::size_t ratio = n_max_ / level;
    require((step + 1) * ratio <= finest_steps_, "tableau: step beyond horizon");
    require(particle < particles_, "tableau: particle index out of range");
    const std::size_t first = step * ratio;
    for (std::size_t c = 0; c < noise_dim_; ++c) {
        double sum = 0.0;
        if (!storage_.empty()) {
            for (std::size_t k = first; k < first + ratio; ++k)
                sum += storage_[(k * particles_ + particle) * noise_dim_ + c];
        } else {
            for (std::size_t k = first; k < first + ratio; ++k) sum += generate(particle, c, k);
        }
        out[c] = sum;
    }
}

}  // namespace mvsde
