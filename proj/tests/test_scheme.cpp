#include <doctest.h>

#include <cmath>

#include "mvsde/scheme.hpp"

using namespace mvsde;

namespace {

ModelPtr model(const std::string& family, std::map<std::string, double> params, std::size_t d = 1,
               std::optional<double> q = std::nullopt) {
    return make_model({family, d, d, q, std::move(params)});
}

const std::map<std::string, double> kPureCubic = {{"lambda", 0.0}, {"nu", 0.0}, {"kappa", 0.0}, {"c_g", 0.0}};

}  // namespace

TEST_CASE("time grid") {
    const TimeGrid g(2.0, 4);
    CHECK(g.h == 0.25);
    CHECK(g.total_steps == 8);
    CHECK(g.time(3) == 0.75);
    CHECK(g.k_n(0.8) == 0.75);
    CHECK_THROWS_AS(TimeGrid(1.1, 2), ContractViolation);
}

TEST_CASE("one tamed step of a single particle") {
    const TamedModel tm(model("cubic-mean-field", kPureCubic, 1, 1.0), 4, TamingVariant::finite);
    const auto next = step(ParticleEnsemble(1, 1, {1.0}), tm, TimeGrid(1.0, 4), nullptr, {});
    CHECK(next.states()[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(next.t_index() == 1);
}

TEST_CASE("two-particle interaction step") {
    const ModelPtr m = model("cubic-mean-field", {{"cubic", 0.0}, {"lambda", 0.0}, {"nu", 0.0}, {"c_g", 0.0}});
    const TamedModel tm(m, 1, TamingVariant::finite);
    StepOptions plain;
    plain.kind = SchemeKind::plain_euler;
    const auto next = step(ParticleEnsemble(2, 1, {1.0, -1.0}), tm, TimeGrid(1.0, 1), nullptr, plain);
    CHECK(next.states() == std::vector<double>{-3.0, 3.0});

    // With taming at n = 1: f^1(1,-1) = 8 / (1 + 16) on the diagonal-free pair.
    const auto tamed = step(ParticleEnsemble(2, 1, {1.0, -1.0}), tm, TimeGrid(1.0, 1), nullptr, {});
    CHECK(tamed.states()[0] == doctest::Approx(1.0 - 4.0 / 17.0).epsilon(1e-15));
    CHECK(tamed.states()[0] == -tamed.states()[1]);
}

TEST_CASE("plain Euler blow-up of the cubic drift") {
    const TamedModel tm(model("cubic-mean-field", kPureCubic), 2, TamingVariant::finite);
    StepOptions plain;
    plain.kind = SchemeKind::plain_euler;
    const TimeGrid grid(100.0, 2);
    auto x = step(ParticleEnsemble(1, 1, {3.0}), tm, grid, nullptr, plain);
    CHECK(x.states()[0] == -10.5);
    x = step(x, tm, grid, nullptr, plain);
    CHECK(x.states()[0] == 568.3125);

    SimulationOptions o;
    o.step = plain;
    const auto r = simulate(tm, grid, nullptr, ParticleEnsemble(1, 1, {3.0}), o);
    CHECK(r.diverged);
    CHECK(r.divergence_step <= 20);

    SimulationOptions tamed;
    const auto s = simulate(tm, grid, nullptr, ParticleEnsemble(1, 1, {3.0}), tamed);
    CHECK_FALSE(s.diverged);
    CHECK(std::abs(s.final_state.states()[0]) < 3.0);
}

TEST_CASE("zero model keeps the state") {
    const TamedModel tm(model("zero", {}, 2), 8, TamingVariant::finite);
    const TimeGrid grid(1.0, 8);
    const BrownianTableau tab(1, 5, 2, 1.0, 8);
    const auto x0 = sample_initial({InitialLaw::Kind::gaussian, 0.0, 1.0}, 5, 2, 1);
    const auto r = simulate(tm, grid, &tab, x0, {});
    CHECK(r.final_state.states() == x0.states());
    CHECK(r.steps_taken == 8);
}

TEST_CASE("deterministic linear decay matches the Euler product") {
    const ModelPtr m = model("lipschitz-baseline", {{"alpha", 1.0}, {"nu", 0.0}});
    const TamedModel tm(m, 100, TamingVariant::off);
    const auto r = simulate(tm, TimeGrid(1.0, 100), nullptr, ParticleEnsemble(1, 1, {1.0}), {});
    const double euler = std::pow(0.99, 100);
    CHECK(std::abs(r.final_state.states()[0] - euler) <= 1e-12);
    CHECK(euler == doctest::Approx(0.3660323).epsilon(1e-7));
}

TEST_CASE("step is explicit and repeatable") {
    const ModelPtr m = model("cubic-mean-field", {}, 2);
    const TamedModel tm(m, 16, TamingVariant::finite);
    const TimeGrid grid(1.0, 16);
    const BrownianTableau tab(4, 8, 2, 1.0, 16);
    const auto x0 = sample_initial({InitialLaw::Kind::gaussian, 0.0, 1.0}, 8, 2, 4);
    const auto a = step(x0, tm, grid, &tab, {});
    const auto b = step(x0, tm, grid, &tab, {});
    CHECK(a.states() == b.states());
}

TEST_CASE("antisymmetric-pair interaction is bit-identical to the naive loop") {
    for (const char* family : {"cubic-mean-field", "pairwise-vlasov", "ergodic-dissipative"}) {
        const ModelPtr m = model(family, {}, 2);
        const TamedModel tm(m, 16, TamingVariant::finite);
        const TimeGrid grid(1.0, 16);
        const BrownianTableau tab(2, 16, 2, 1.0, 16);
        const auto x0 = sample_initial({InitialLaw::Kind::gaussian, 0.0, 2.0}, 16, 2, 2);
        SimulationOptions naive, pairs;
        pairs.step.interaction = InteractionMode::antisymmetric_pairs;
        const auto a = simulate(tm, grid, &tab, x0, naive);
        const auto b = simulate(tm, grid, &tab, x0, pairs);
        CHECK(a.final_state.states() == b.final_state.states());
    }
}

TEST_CASE("centre of mass is conserved under a pure antisymmetric kernel") {
    const ModelPtr m = model("cubic-mean-field", {{"cubic", 0.0}, {"lambda", 0.0}, {"nu", 0.0}, {"c_g", 0.0}}, 2);
    const TamedModel tm(m, 100, TamingVariant::finite);
    const auto x0 = sample_initial({InitialLaw::Kind::gaussian, 1.0, 1.0}, 32, 2, 3);
    const auto r = simulate(tm, TimeGrid(10.0, 100), nullptr, x0, {});
    REQUIRE(r.steps_taken == 1000);
    for (std::size_t k = 0; k < 2; ++k) {
        const double before = x0.measure().mean()[k];
        const double after = r.final_state.measure().mean()[k];
        CHECK(std::abs(after - before) <= 1e-10 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("tamed one-step displacement bound") {
    const ModelPtr m = model("cubic-mean-field", {}, 1);
    const TamedModel tm(m, 4, TamingVariant::finite);
    const TimeGrid grid(1.0, 4);
    const BrownianTableau tab(8, 16, 1, 1.0, 4);
    const auto x0 = sample_initial({InitialLaw::Kind::gaussian, 0.0, 3.0}, 16, 1, 8);
    const auto x1 = step(x0, tm, grid, &tab, {});
    const EmpiricalMeasure mu = x0.measure();
    for (std::size_t i = 0; i < 16; ++i) {
        double b = 0, s = 0, dw = 0, fmax = 0, gmax = 0;
        tm.drift(0.0, x0.particle(i), mu, MutVec(&b, 1));
        tm.diffusion(0.0, x0.particle(i), mu, MutVec(&s, 1));
        for (std::size_t j = 0; j < 16; ++j) {
            double f = 0, g = 0;
            tm.kernel_f(x0.particle(i), x0.particle(j), MutVec(&f, 1));
            tm.kernel_g(x0.particle(i), x0.particle(j), MutVec(&g, 1));
            fmax = std::max(fmax, std::abs(f));
            gmax = std::max(gmax, std::abs(g));
        }
        tab.increment(4, i, 0, MutVec(&dw, 1));
        const double move = std::abs(x1.particle(i)[0] - x0.particle(i)[0]);
        CHECK(move <= (grid.h * (std::abs(b) + fmax) + std::abs(dw) * (std::abs(s) + gmax)) * (1 + 1e-12));
    }
}

TEST_CASE("simulate contract checks") {
    const TamedModel tm(model("zero", {}), 8, TamingVariant::finite);
    const BrownianTableau tab(1, 2, 1, 1.0, 12);
    CHECK_THROWS_AS(simulate(tm, TimeGrid(1.0, 8), &tab, ParticleEnsemble(2, 1), {}), ContractViolation);
    const BrownianTableau short_tab(1, 2, 1, 0.5, 8);
    CHECK_THROWS_AS(simulate(tm, TimeGrid(1.0, 8), &short_tab, ParticleEnsemble(2, 1), {}), ContractViolation);
}

TEST_CASE("observer sees step 0, strided steps and the last step") {
    const TamedModel tm(model("zero", {}), 4, TamingVariant::finite);
    SimulationOptions o;
    o.stride = 3;
    std::vector<std::size_t> seen;
    o.observer = [&](const ParticleEnsemble&, std::size_t k) { seen.push_back(k); };
    simulate(tm, TimeGrid(2.0, 4), nullptr, ParticleEnsemble(1, 1), o);
    CHECK(seen == std::vector<std::size_t>{0, 3, 6, 8});
}

TEST_CASE("thread count does not change the result") {
    const ModelPtr m = model("pairwise-vlasov", {}, 3);
    const TamedModel tm(m, 32, TamingVariant::finite);
    const TimeGrid grid(0.5, 32);
    const BrownianTableau tab(6, 40, 3, 0.5, 32);
    const auto x0 = sample_initial({InitialLaw::Kind::gaussian, 0.0, 1.0}, 40, 3, 6);
    set_thread_count(1);
    const auto a = simulate(tm, grid, &tab, x0, {});
    set_thread_count(4);
    const auto b = simulate(tm, grid, &tab, x0, {});
    set_thread_count(1);
    CHECK(a.final_state.states() == b.final_state.states());
}
