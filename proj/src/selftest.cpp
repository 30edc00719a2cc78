#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mvsde/cli.hpp"
#include "mvsde/metrics.hpp"
#include "mvsde/scheme.hpp"

namespace mvsde {

namespace {

constexpr std::uint64_t kSeed = 20240611;

// Standard normal vector of length `count` from the probe stream.
std::vector<double> normals(std::uint64_t index, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; k += 2) {
        const auto z = counter_normal_pair(kSeed, StreamDomain::probe, index, 0, static_cast<std::uint32_t>(k / 2));
        v[k] = z[0];
        if (k + 1 < count) v[k + 1] = z[1];
    }
    return v;
}

bool check_taming() {
    const std::vector<std::size_t> levels = {1, 4, 16, 256};
    for (const auto& family : model_families()) {
        const ModelPtr model = make_model({family, 2, 2, std::nullopt, {}});
        const std::size_t d = model->d();
        std::vector<double> b(d), bn(d), f(d), fr(d), prev(d);
        for (std::uint64_t s = 0; s < 500; ++s) {
            const auto raw = normals(s, 4 * d);
            std::vector<double> x(raw.begin(), raw.begin() + d), y(raw.begin() + d, raw.begin() + 2 * d);
            for (auto& v : x) v *= 3.0;
            const std::vector<double> atoms(raw.begin() + 2 * d, raw.end());
            const EmpiricalMeasure mu(atoms, d);
            model->drift(0.0, x, mu, b);
            double prev_norm = 0.0;
            for (std::size_t n : levels) {
                const TamedModel tm(model, n, TamingVariant::finite);
                tm.drift(0.0, x, mu, bn);
                const double nb = norm(b), nbn = norm(bn);
                if (nbn > nb) return false;
                const double r = norm(x);
                if (r > 0.0 && nbn > std::sqrt(double(n)) * nb / std::pow(r, 2.0 * model->q()))
                    return false;
                if (nbn < prev_norm) return false;
                prev_norm = nbn;
                if (model->f_antisymmetric()) {
                    tm.kernel_f(x, y, f);
                    tm.kernel_f(y, x, fr);
                    for (std::size_t k = 0; k < d; ++k)
                        if (f[k] != -fr[k]) return false;
                }
            }
        }
    }
    return true;
}

double brute_force_w2(const std::vector<double>& a, const std::vector<double>& b, std::size_t n, std::size_t d) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            cost += squared_distance(ConstVec(a).subspan(i * d, d), ConstVec(b).subspan(perm[i] * d, d));
        best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::sqrt(best / static_cast<double>(n));
}

bool check_w2() {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t n = 2 + s % 5, d = 1 + s % 3;
        const auto raw = normals(1000 + s, 2 * n * d);
        std::vector<double> a(raw.begin(), raw.begin() + n * d), b(raw.begin() + n * d, raw.end());
        const double exact = w2(EmpiricalMeasure(a, d), EmpiricalMeasure(b, d), W2Method::exact_assignment).value;
        if (std::abs(exact - brute_force_w2(a, b, n, d)) > 1e-10) return false;
    }
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t n = 1 + (s * 7) % 64;
        const auto raw = normals(2000 + s, 2 * n);
        const std::vector<double> xa(raw.begin(), raw.begin() + n), xb(raw.begin() + n, raw.end());
        const EmpiricalMeasure a(xa, 1), b(xb, 1);
        const double sorted = w2(a, b, W2Method::sorted_1d).value;
        const double exact = w2(a, b, W2Method::exact_assignment).value;
        if (std::abs(sorted - exact) > 1e-10) return false;
    }
    return true;
}

bool check_refinement() {
    const std::size_t n_max = 256, particles = 3, l = 2;
    const double T = 2.0;
    const BrownianTableau tab(kSeed, particles, l, T, n_max);
    std::vector<double> coarse(l), fine(l);
    for (std::size_t p = 0; p < particles; ++p) {
        std::vector<double> total_finest(l, 0.0);
        for (std::size_t k = 0; k < steps_for(T, n_max); ++k)
            for (std::size_t c = 0; c < l; ++c) total_finest[c] += tab.finest(p, c, k);
        for (std::size_t n = 1; n <= n_max; n *= 2) {
            std::vector<double> total(l, 0.0);
            for (std::size_t k = 0; k < steps_for(T, n); ++k) {
                tab.increment(n, p, k, coarse);
                if (n < n_max) {
                    std::vector<double> sum(l, 0.0);
                    tab.increment(2 * n, p, 2 * k, fine);
                    for (std::size_t c = 0; c < l; ++c) sum[c] += fine[c];
                    tab.increment(2 * n, p, 2 * k + 1, fine);
                    for (std::size_t c = 0; c < l; ++c) sum[c] += fine[c];
                    if (sum != coarse) return false;
                }
                for (std::size_t c = 0; c < l; ++c) total[c] += coarse[c];
            }
            if (total != total_finest) return false;
        }
    }
    return true;
}

bool check_interaction_modes() {
    const ModelPtr model = make_model({"pairwise-vlasov", 2, 2, std::nullopt, {}});
    const TimeGrid grid(0.25, 16);
    const BrownianTableau tab(kSeed, 16, 2, grid.T, 16);
    const ParticleEnsemble x0 = sample_initial({InitialLaw::Kind::gaussian, 0.0, 2.0}, 16, 2, kSeed);
    const TamedModel tm(model, 16, TamingVariant::finite);
    SimulationOptions naive, pairs;
    pairs.step.interaction = InteractionMode::antisymmetric_pairs;
    const auto a = simulate(tm, grid, &tab, x0, naive);
    const auto b = simulate(tm, grid, &tab, x0, pairs);
    return a.final_state.states() == b.final_state.states();
}

bool check_center_of_mass() {
    // Zero drift and diffusion except the antisymmetric kernel: the mean is conserved.
    const ModelPtr model =
        make_model({"pairwise-vlasov", 1, 1, std::nullopt, {{"cubic", 0.0}, {"coupling", 0.0}, {"c_sigma", 0.0},
                                                            {"nu", 0.0}, {"c_g", 0.0}}});
    const TimeGrid grid(1.0, 64);
    const ParticleEnsemble x0 = sample_initial({InitialLaw::Kind::gaussian, 0.5, 1.0}, 32, 1, kSeed);
    const TamedModel tm(model, 64, TamingVariant::finite);
    const auto r = simulate(tm, grid, nullptr, x0, {});
    const double m0 = x0.measure().mean()[0], m1 = r.final_state.measure().mean()[0];
    return std::abs(m0 - m1) < 1e-10;
}

}  // namespace

bool run_selftest(std::ostream& out) {
    const std::vector<std::pair<std::string, std::function<bool()>>> checks = {
        {"taming dominance, monotonicity and kernel antisymmetry", check_taming},
        {"W2 against brute force and sorted coupling", check_w2},
        {"Brownian refinement coupling", check_refinement},
        {"naive and antisymmetric-pair interaction agree bitwise", check_interaction_modes},
        {"centre of mass conserved under antisymmetric interaction", check_center_of_mass},
    };
    bool ok = true;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& [name, fn] : checks) {
        bool pass = false;
        std::string note;
        try {
            pass = fn();
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        out << (pass ? "PASS " : "FAIL ") << name << note << "\n";
        ok = ok && pass;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << fmt::format("selftest {} in {:.2f} s\n", ok ? "passed" : "failed", secs);
    return ok;
}

}  // namespace mvsde
