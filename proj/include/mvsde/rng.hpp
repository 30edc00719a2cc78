#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mvsde/common.hpp"

namespace mvsde {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
/// the output is a pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Independent sub-streams carved out of one seed.
enum class StreamDomain : std::uint32_t {
    brownian = 0,
    initial_state = 1,
    probe = 2,
    projections = 3,
};

/// Two standard normals from counter (index, particle, slot) of a domain,
/// via Box-Muller on two 53-bit uniforms in (0, 1].
std::array<double, 2> counter_normal_pair(std::uint64_t seed, StreamDomain domain, std::uint64_t index,
                                          std::uint32_t particle, std::uint32_t slot);

/// Uniform in (0, 1] from the same counter layout; returns four values.
std::array<double, 4> counter_uniforms(std::uint64_t seed, StreamDomain domain, std::uint64_t index,
                                       std::uint32_t particle, std::uint32_t slot);

/// Name of the normal sampler, embedded in reports.
inline constexpr const char* kNormalSampler = "philox4x32-10 + box-muller, quantized 2^-36";

/// Brownian increments on the finest grid h = 1/n_max, shared by every level
/// n that divides n_max. Finest increments are rounded to multiples of 2^-36,
/// so every partial sum of them is exact in double precision; coarse
/// increments are defined by aggregation and are therefore independent of
/// summation order.
class BrownianTableau {
public:
    enum class Policy { store, regenerate, automatic };

    struct Options {
        Policy policy = Policy::automatic;
        std::size_t memory_cap_bytes = std::size_t{1} << 28;
    };

    BrownianTableau(std::uint64_t seed, std::size_t particles, std::size_t noise_dim, double horizon,
                    std::size_t n_max, Options options);
    BrownianTableau(std::uint64_t seed, std::size_t particles, std::size_t noise_dim, double horizon,
                    std::size_t n_max)
        : BrownianTableau(seed, particles, noise_dim, horizon, n_max, Options{}) {}

    std::uint64_t seed() const { return seed_; }
    std::size_t particles() const { return particles_; }
    std::size_t noise_dim() const { return noise_dim_; }
    double horizon() const { return horizon_; }
    std::size_t n_max() const { return n_max_; }
    std::size_t finest_steps() const { return finest_steps_; }
    bool stored() const { return !storage_.empty(); }

    /// Finest-level increment of one scalar component.
    double finest(std::size_t particle, std::size_t component, std::size_t step) const;

    /// Increment over step k of level n for one particle, written to out (length l).
    void increment(std::size_t level, std::size_t particle, std::size_t step, MutVec out) const;

private:
    double generate(std::size_t particle, std::size_t component, std::size_t step) const;

    std::uint64_t seed_;
    std::size_t particles_;
    std::size_t noise_dim_;
    double horizon_;
    std::size_t n_max_;
    std::size_t finest_steps_;
    double scale_;
    std::vector<double> storage_;  // [step][particle][component]
};

/// Number of grid steps n * T, validated to be an integer.
std::size_t steps_for(double horizon, std::size_t n);

}  // namespace mvsde
