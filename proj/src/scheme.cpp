#include "mvsde/scheme.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <omp.h>

namespace mvsde {

TimeGrid::TimeGrid(double horizon, std::size_t steps_per_unit)
    : T(horizon), n(steps_per_unit), h(1.0 / static_cast<double>(steps_per_unit)),
      total_steps(steps_for(horizon, steps_per_unit)) {}

double TimeGrid::k_n(double t) const {
    const double nn = static_cast<double>(n);
    return std::floor(nn * t) / nn;
}

std::string to_string(SchemeKind kind) {
    return kind == SchemeKind::tamed_euler ? "tamed_euler" : "plain_euler";
}

SchemeKind scheme_kind_from_string(const std::string& text) {
    if (text == "tamed_euler") return SchemeKind::tamed_euler;
    if (text == "plain_euler") return SchemeKind::plain_euler;
    throw ContractViolation("unknown scheme kind '" + text + "'");
}

std::string to_string(InteractionMode mode) {
    return mode == InteractionMode::naive ? "naive" : "antisymmetric_pairs";
}

InteractionMode interaction_mode_from_string(const std::string& text) {
    if (text == "naive") return InteractionMode::naive;
    if (text == "antisymmetric_pairs") return InteractionMode::antisymmetric_pairs;
    throw ContractViolation("unknown interaction mode '" + text + "'");
}

namespace {

int g_threads = 1;

// f^n(X_i, X_j) for i < j, row-major over the strict upper triangle.
std::vector<double> upper_triangle_f(const ParticleEnsemble& ens, const TamedModel& tm) {
    const std::size_t N = ens.size(), d = ens.dim();
    std::vector<double> table(N * N * d, 0.0);
#pragma omp parallel for schedule(dynamic, 8) num_threads(g_threads)
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            tm.kernel_f(ens.particle(i), ens.particle(j), MutVec(table.data() + (i * N + j) * d, d));
    return table;
}

}  // namespace

ParticleEnsemble step(const ParticleEnsemble& ens, const TamedModel& tm_in, const TimeGrid& grid,
                      const BrownianTableau* tableau, const StepOptions& options) {
    require(!ens.overflowed(), "step: ensemble has overflowed");
    const CoefficientModel& model = tm_in.base();
    const std::size_t N = ens.size(), d = ens.dim(), l = model.l();
    require(d == model.d(), "step: ensemble dimension does not match the model");
    if (tableau) {
        require(tableau->particles() >= N, "step: tableau has fewer particles than the ensemble");
        require(tableau->noise_dim() == l, "step: tableau noise dimension does not match the model");
    }

    const TamedModel plain(tm_in.base_ptr(), tm_in.n(), TamingVariant::off);
    const TamedModel& tm = options.kind == SchemeKind::plain_euler ? plain : tm_in;

    const bool use_f = !model.kernel_f_is_zero();
    const bool use_g = !model.kernel_g_is_zero();
    const bool pairs = use_f && options.interaction == InteractionMode::antisymmetric_pairs &&
                       model.f_antisymmetric();
    const std::vector<double> f_table = pairs ? upper_triangle_f(ens, tm) : std::vector<double>{};

    const EmpiricalMeasure mu = ens.measure();
    const double t = grid.time(ens.t_index());
    const double h = grid.h;
    const double count = static_cast<double>(N);
    const std::size_t k = ens.t_index();

    ParticleEnsemble next(N, d);
#pragma omp parallel for schedule(static) num_threads(g_threads)
    for (std::size_t i = 0; i < N; ++i) {
        std::array<double, kMaxDim> drift{}, fsum{}, fterm{}, dw{};
        std::array<double, kMaxDim * kMaxDim> diff{}, gsum{}, gterm{};
        const ConstVec x = ens.particle(i);
        tm.drift(t, x, mu, MutVec(drift.data(), d));
        tm.diffusion(t, x, mu, MutVec(diff.data(), d * l));

        if (use_f || use_g) {
            for (std::size_t j = 0; j < N; ++j) {
                const ConstVec y = ens.particle(j);
                if (pairs) {
                    if (j > i) {
                        const double* src = f_table.data() + (i * N + j) * d;
                        for (std::size_t c = 0; c < d; ++c) fterm[c] = src[c];
                    } else if (j < i) {
                        const double* src = f_table.data() + (j * N + i) * d;
                        for (std::size_t c = 0; c < d; ++c) fterm[c] = -src[c];
                    } else {
                        tm.kernel_f(x, y, MutVec(fterm.data(), d));
                    }
                    if (use_g) tm.kernel_g(x, y, MutVec(gterm.data(), d * l));
                } else if (use_f && use_g) {
                    tm.kernels(x, y, MutVec(fterm.data(), d), MutVec(gterm.data(), d * l));
                } else if (use_f) {
                    tm.kernel_f(x, y, MutVec(fterm.data(), d));
                } else {
                    tm.kernel_g(x, y, MutVec(gterm.data(), d * l));
                }
                if (use_f)
                    for (std::size_t c = 0; c < d; ++c) fsum[c] += fterm[c];
                if (use_g)
                    for (std::size_t c = 0; c < d * l; ++c) gsum[c] += gterm[c];
            }
        }

        if (tableau) tableau->increment(grid.n, i, k, MutVec(dw.data(), l));

        MutVec out = next.particle(i);
        for (std::size_t a = 0; a < d; ++a) {
            const double b_total = drift[a] + fsum[a] / count;
            double noise = 0.0;
            for (std::size_t c = 0; c < l; ++c) noise += (diff[a * l + c] + gsum[a * l + c] / count) * dw[c];
            out[a] = x[a] + b_total * h + noise;
        }
    }
    next.refresh_overflow();
    next.set_t_index(k + 1);
    return next;
}

bool exceeds(const ParticleEnsemble& ens, double threshold) {
    for (double v : ens.states())
        if (!std::isfinite(v) || std::abs(v) > threshold) return true;
    return false;
}

SimulationResult simulate(const TamedModel& tm, const TimeGrid& grid, const BrownianTableau* tableau,
                          ParticleEnsemble initial, const SimulationOptions& options) {
    require(options.stride >= 1, "simulate: stride must be >= 1");
    if (tableau) {
        require(tableau->n_max() % grid.n == 0, "simulate: level " + std::to_string(grid.n) +
                                                    " does not divide tableau n_max " +
                                                    std::to_string(tableau->n_max()));
        require(tableau->finest_steps() >= grid.total_steps * (tableau->n_max() / grid.n),
                "simulate: tableau horizon is shorter than the grid");
    }
    initial.set_t_index(0);
    SimulationResult result{std::move(initial), false, 0, 0};
    if (options.observer) options.observer(result.final_state, 0);
    if (exceeds(result.final_state, options.divergence_threshold)) {
        result.diverged = true;
        return result;
    }
    for (std::size_t k = 0; k < grid.total_steps; ++k) {
        result.final_state = step(result.final_state, tm, grid, tableau, options.step);
        result.steps_taken = k + 1;
        const bool bad = exceeds(result.final_state, options.divergence_threshold);
        if (options.observer && ((k + 1) % options.stride == 0 || bad || k + 1 == grid.total_steps))
            options.observer(result.final_state, k + 1);
        if (bad) {
            result.diverged = true;
            result.divergence_step = k + 1;
            break;
        }
    }
    return result;
}

void set_thread_count(int threads) { g_threads = std::max(1, threads); }
int thread_count() { return g_threads; }

}  // namespace mvsde
