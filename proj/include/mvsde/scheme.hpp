#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "mvsde/ensemble.hpp"
#include "mvsde/rng.hpp"
#include "mvsde/taming.hpp"

namespace mvsde {

/// Uniform grid t_k = k h on [0, T] with h = 1/n; T must be a multiple of h.
struct TimeGrid {
    double T = 1.0;
    std::size_t n = 1;
    double h = 1.0;
    std::size_t total_steps = 1;

    TimeGrid(double horizon, std::size_t steps_per_unit);

    double time(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(n); }
    /// floor(n t) / n.
    double k_n(double t) const;
};

enum class SchemeKind { tamed_euler, plain_euler };
std::string to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(const std::string& text);

/// naive evaluates f^n(X_i, X_j) for every ordered pair; antisymmetric_pairs
/// evaluates each unordered pair once and negates. Both produce identical bits.
enum class InteractionMode { naive, antisymmetric_pairs };
std::string to_string(InteractionMode mode);
InteractionMode interaction_mode_from_string(const std::string& text);

struct StepOptions {
    SchemeKind kind = SchemeKind::tamed_euler;
    InteractionMode interaction = InteractionMode::naive;
};

/// One explicit step from t_k to t_{k+1}. Every coefficient is evaluated at
/// the old state and old empirical measure; the interaction sums run over all
/// j including j = i, in ascending j. Particle i of the ensemble is driven by
/// particle i of the tableau at level grid.n. A null tableau means zero noise.
/// plain_euler ignores the taming of `tm` and uses its base coefficients.
ParticleEnsemble step(const ParticleEnsemble& ens, const TamedModel& tm, const TimeGrid& grid,
                      const BrownianTableau* tableau, const StepOptions& options);

struct SimulationOptions {
    StepOptions step;
    /// A step whose result holds a coordinate above this magnitude (or a
    /// non-finite one) ends the run as diverged.
    double divergence_threshold = 1e10;
    /// Called with the state after every `stride`-th step, and with step 0.
    std::function<void(const ParticleEnsemble&, std::size_t)> observer;
    std::size_t stride = 1;
};

struct SimulationResult {
    ParticleEnsemble final_state;
    bool diverged = false;
    std::size_t divergence_step = 0;  // step index k at which the state left the threshold
    std::size_t steps_taken = 0;
};

/// Runs grid.total_steps steps from `initial`.
SimulationResult simulate(const TamedModel& tm, const TimeGrid& grid, const BrownianTableau* tableau,
                          ParticleEnsemble initial, const SimulationOptions& options);

/// True when some coordinate is non-finite or exceeds the threshold in magnitude.
bool exceeds(const ParticleEnsemble& ens, double threshold);

/// Worker count used by the parallel loops (OpenMP). Values < 1 select 1.
void set_thread_count(int threads);
int thread_count();

}  // namespace mvsde
