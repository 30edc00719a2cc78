#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "mvsde/measure.hpp"

namespace mvsde {

/// Returned by statistics of an ensemble that holds non-finite coordinates.
inline constexpr double kExplosionSentinel = std::numeric_limits<double>::infinity();

/// N particles in R^d at one grid time, row-major N x d.
class ParticleEnsemble {
public:
    ParticleEnsemble(std::size_t count, std::size_t dim);
    ParticleEnsemble(std::size_t count, std::size_t dim, std::vector<double> states);

    std::size_t size() const { return count_; }
    std::size_t dim() const { return dim_; }
    std::size_t t_index() const { return t_index_; }
    void set_t_index(std::size_t k) { t_index_ = k; }
    bool overflowed() const { return overflow_; }

    ConstVec particle(std::size_t i) const { return ConstVec(states_).subspan(i * dim_, dim_); }
    MutVec particle(std::size_t i) { return MutVec(states_).subspan(i * dim_, dim_); }
    const std::vector<double>& states() const { return states_; }
    std::vector<double>& states() { return states_; }

    /// Rescans the states and sets the overflow flag iff any is non-finite.
    void refresh_overflow();

    EmpiricalMeasure measure() const { return EmpiricalMeasure(states_, dim_); }

    /// Copy of the first `count` particles.
    ParticleEnsemble prefix(std::size_t count) const;

private:
    std::size_t count_;
    std::size_t dim_;
    std::size_t t_index_ = 0;
    bool overflow_ = false;
    std::vector<double> states_;
};

/// (1/N) sum_i |X^i|^p, or the explosion sentinel for an overflowed ensemble.
double empirical_moment(const ParticleEnsemble& ens, double p);

/// W2(mu_N, delta_0) = sqrt of the empirical second moment.
double w2_to_origin(const ParticleEnsemble& ens);

/// Header `# t=<time> N=<N> d=<d>`, then one comma-separated row per particle.
/// Non-finite values are written as "inf" / "-inf" / "nan".
void snapshot_csv(const ParticleEnsemble& ens, double time, std::ostream& sink);

/// Named initial laws with analytic moments.
struct InitialLaw {
    enum class Kind { point, gaussian, uniform_ball };
    Kind kind = Kind::gaussian;
    double mean = 0.0;    // point value / Gaussian mean / ball centre, per component
    double spread = 1.0;  // Gaussian std / ball radius

    bool operator==(const InitialLaw&) const = default;
};

std::string to_string(InitialLaw::Kind kind);
InitialLaw::Kind initial_law_kind_from_string(const std::string& text);

/// Draws N i.i.d. particles. Particle i depends only on (seed, i), so the
/// first N particles of a larger draw coincide with a draw of size N.
ParticleEnsemble sample_initial(const InitialLaw& law, std::size_t count, std::size_t dim,
                                std::uint64_t seed);

}  // namespace mvsde
