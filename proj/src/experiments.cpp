#include "mvsde/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "mvsde/rng.hpp"
#include "mvsde/scheme.hpp"

namespace mvsde {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::degenerate: return "degenerate";
        case Verdict::exploratory: return "exploratory";
    }
    return "fail";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BrownianTableau make_tableau(const RunConfig& cfg, std::uint64_t seed, std::size_t particles,
                             std::size_t noise_dim, std::size_t n_max) {
    BrownianTableau::Options options;
    options.memory_cap_bytes = cfg.tableau_memory_cap;
    return BrownianTableau(seed, particles, noise_dim, cfg.T, n_max, options);
}

SimulationOptions sim_options(const RunConfig& cfg, SchemeKind kind) {
    SimulationOptions o;
    o.step.kind = kind;
    o.step.interaction = cfg.interaction;
    o.divergence_threshold = cfg.divergence_threshold;
    return o;
}

W2Options w2_options(const RunConfig& cfg) {
    W2Options o;
    o.projections = cfg.projections;
    o.seed = cfg.seed;
    o.assignment_cap = cfg.assignment_cap;
    return o;
}

// Runs body(m) for every repetition on the worker pool; results are stored by
// index so the merge order never depends on scheduling.
template <class Result, class Body>
std::vector<Result> for_each_rep(std::size_t reps, Body body) {
    std::vector<Result> results(reps);
    std::vector<std::exception_ptr> failures(reps);
    const long count = static_cast<long>(reps);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (long m = 0; m < count; ++m) {
        try {
            results[static_cast<std::size_t>(m)] = body(static_cast<std::size_t>(m));
        } catch (...) {
            failures[static_cast<std::size_t>(m)] = std::current_exception();
        }
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
    return results;
}

double mean_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const double n = static_cast<double>(values.size());
    return order_independent_sum(values) / n;
}

// Standard error of the mean of `values`.
double standard_error(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double m = mean_of(values);
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - m) * (values[i] - m);
    const double n = static_cast<double>(values.size());
    return std::sqrt(order_independent_sum(sq) / (n - 1.0) / n);
}

Json fit_json(const RateFit& fit) {
    Json pts = Json::array();
    for (const auto& [x, y] : fit.points) pts.push_back({x, y});
    return Json{{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}, {"points", pts}};
}

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

Json config_echo(const RunConfig& cfg) {
    const ModelPtr model = make_model(cfg.model);
    Json params = Json::object();
    for (const auto& [k, v] : model->params()) params[k] = v;
    Json constants = Json::object();
    for (const auto& [k, v] : cfg.constants) constants[k] = v;
    auto law = [](const InitialLaw& l) {
        return Json{{"kind", to_string(l.kind)}, {"mean", l.mean}, {"spread", l.spread}};
    };
    return Json{
        {"experiment", to_string(cfg.experiment)},
        {"model",
         {{"family", model->family_id()},
          {"d", model->d()},
          {"l", model->l()},
          {"q", model->q()},
          {"measure_mode", to_string(model->measure_mode())},
          {"f_antisymmetric", model->f_antisymmetric()},
          {"params", params}}},
        {"grid", {{"T", cfg.T}, {"n", cfg.n}, {"levels", cfg.levels}, {"n_max", cfg.n_max}}},
        {"ensemble",
         {{"N", cfg.N},
          {"sizes", cfg.sizes},
          {"N_ref", cfg.N_ref},
          {"initial", law(cfg.initial)},
          {"initial_b", law(cfg.initial_b)},
          {"probe_count", cfg.probe_count}}},
        {"scheme",
         {{"taming", to_string(cfg.taming)},
          {"kind", to_string(cfg.kind)},
          {"interaction", to_string(cfg.interaction)},
          {"divergence_threshold", cfg.divergence_threshold}}},
        {"metrics",
         {{"method", to_string(cfg.method)},
          {"projections", cfg.projections},
          {"assignment_cap", cfg.assignment_cap},
          {"p", cfg.p}}},
        {"run", {{"seed", cfg.seed}, {"reps", cfg.reps}, {"error_norm", cfg.error_norm}, {"p0", cfg.p0}}},
        {"verdict_bands",
         {{"slope_min", cfg.slope_min},
          {"slope_max", cfg.slope_max},
          {"r2_min", cfg.r2_min},
          {"w2_ratio_max", cfg.w2_ratio_max}}},
        {"constants", constants},
        {"version", kVersion},
        {"normal_sampler", kNormalSampler},
    };
}

// ---------------------------------------------------------------------------
// Strong rate: self-convergence against the finest level on one Brownian path.
// ---------------------------------------------------------------------------

RateReport run_strong_rate(const RunConfig& cfg) {
    const ModelPtr model = make_model(cfg.model);
    const std::size_t N = cfg.N, d = model->d(), l = model->l();
    const auto& levels = cfg.levels;
    require(levels.size() >= 2, "strong rate: need at least two levels");
    for (std::size_t lv : levels)
        require(lv >= 1 && cfg.n_max % lv == 0,
                fmt::format("strong rate: level {} does not divide n_max {}", lv, cfg.n_max));
    const bool terminal = cfg.error_norm == "terminal";

    struct Rep {
        std::vector<double> e;          // per level: mean_i max_k |diff|^p
        std::vector<char> diverged;     // per level
    };

    auto rep_body = [&](std::size_t m) {
        const std::uint64_t seed = cfg.seed + m;
        const BrownianTableau tab = make_tableau(cfg, seed, N, l, cfg.n_max);
        const ParticleEnsemble x0 = sample_initial(cfg.initial, N, d, seed);
        Rep rep{std::vector<double>(levels.size(), 0.0), std::vector<char>(levels.size(), 0)};

        const TimeGrid ref_grid(cfg.T, cfg.n_max);
        const TamedModel ref_model(model, cfg.n_max, cfg.taming);
        std::vector<double> ref_path((ref_grid.total_steps + 1) * N * d);
        SimulationOptions ref_opts = sim_options(cfg, cfg.kind);
        ref_opts.observer = [&](const ParticleEnsemble& e, std::size_t k) {
            std::copy(e.states().begin(), e.states().end(), ref_path.begin() + k * N * d);
        };
        const SimulationResult ref = simulate(ref_model, ref_grid, &tab, x0, ref_opts);
        if (ref.diverged) {
            std::fill(rep.diverged.begin(), rep.diverged.end(), 1);
            return rep;
        }

        for (std::size_t a = 0; a < levels.size(); ++a) {
            const TimeGrid grid(cfg.T, levels[a]);
            const TamedModel tm(model, levels[a], cfg.taming);
            const std::size_t ratio = cfg.n_max / levels[a];
            std::vector<double> worst(N, 0.0);
            SimulationOptions opts = sim_options(cfg, cfg.kind);
            opts.observer = [&](const ParticleEnsemble& e, std::size_t k) {
                if (terminal && k != grid.total_steps) return;
                const double* r = ref_path.data() + k * ratio * N * d;
                for (std::size_t i = 0; i < N; ++i) {
                    const double gap = std::sqrt(squared_distance(e.particle(i), ConstVec(r + i * d, d)));
                    worst[i] = std::max(worst[i], gap);
                }
            };
            const SimulationResult run = simulate(tm, grid, &tab, x0, opts);
            if (run.diverged) {
                rep.diverged[a] = 1;
                continue;
            }
            for (double& w : worst) w = std::pow(w, cfg.p);
            rep.e[a] = mean_of(worst);
        }
        return rep;
    };
    const auto reps = for_each_rep<Rep>(cfg.reps, rep_body);

    RateReport report;
    report.name = "strong_rate";
    report.level_name = "n";
    std::vector<double> hs, errs;
    bool any_zero = false;
    std::size_t diverged_total = 0;
    for (std::size_t a = 0; a < levels.size(); ++a) {
        std::vector<double> samples;
        std::size_t diverged = 0;
        for (const Rep& r : reps) {
            if (r.diverged[a]) ++diverged;
            else samples.push_back(r.e[a]);
        }
        diverged_total += diverged;
        LevelError row{static_cast<double>(levels[a]), kInf, 0.0, diverged};
        if (!samples.empty()) {
            const double mean = mean_of(samples);
            row.error = std::pow(mean, 1.0 / cfg.p);
            row.stderr_ = mean > 0.0 ? row.error / (cfg.p * mean) * standard_error(samples) : 0.0;
        }
        if (!(row.error > 0.0)) any_zero = true;
        hs.push_back(1.0 / static_cast<double>(levels[a]));
        errs.push_back(row.error);
        report.rows.push_back(row);
    }

    Json checks = Json::object();
    if (any_zero || std::any_of(errs.begin(), errs.end(), [](double e) { return !std::isfinite(e); })) {
        report.verdict = Verdict::degenerate;
        report.warnings.push_back("some level has zero or non-finite error; the fit is skipped");
    } else {
        report.fit = fit_loglog_slope(hs, errs);
        const bool in_band = report.fit->slope >= cfg.slope_min && report.fit->slope <= cfg.slope_max;
        const bool r2_ok = report.fit->r_squared >= cfg.r2_min;
        checks["slope_in_band"] = in_band;
        checks["r_squared_ok"] = r2_ok;
        checks["no_divergence"] = diverged_total == 0;
        report.verdict = in_band && r2_ok && diverged_total == 0 ? Verdict::pass : Verdict::fail;
    }
    report.details["reference_level"] = cfg.n_max;
    report.details["reference"] = "self-convergence against the finest level on the shared Brownian path";
    report.details["error_norm"] = cfg.error_norm;
    report.details["p"] = cfg.p;
    report.details["diverged_total"] = diverged_total;
    report.details["checks"] = checks;
    return report;
}

// ---------------------------------------------------------------------------
// Propagation of chaos: coupled reference system of size N_ref.
// ---------------------------------------------------------------------------

namespace {

struct PocSystems {
    ModelPtr model;
    BrownianTableau tableau;
    ParticleEnsemble initial;
};

PocSystems poc_setup(const RunConfig& cfg, std::size_t rep) {
    ModelPtr model = make_model(cfg.model);
    const std::uint64_t seed = cfg.seed + rep;
    BrownianTableau tab = make_tableau(cfg, seed, cfg.N_ref, model->l(), cfg.n);
    ParticleEnsemble init = sample_initial(cfg.initial, cfg.N_ref, model->d(), seed);
    return {std::move(model), std::move(tab), std::move(init)};
}

std::optional<ParticleEnsemble> poc_run(const RunConfig& cfg, const PocSystems& sys, std::size_t N) {
    const TimeGrid grid(cfg.T, cfg.n);
    const TamedModel tm(sys.model, cfg.n, cfg.taming);
    SimulationResult r = simulate(tm, grid, &sys.tableau, sys.initial.prefix(N), sim_options(cfg, cfg.kind));
    if (r.diverged) return std::nullopt;
    return std::move(r.final_state);
}

double poc_gap(const RunConfig& cfg, const ParticleEnsemble& small, const ParticleEnsemble& ref) {
    const std::size_t N = small.size();
    const std::size_t probes = cfg.probe_count == 0 ? N : std::min(N, cfg.probe_count);
    std::vector<double> sq(probes);
    for (std::size_t i = 0; i < probes; ++i) sq[i] = squared_distance(small.particle(i), ref.particle(i));
    return mean_of(sq);
}

}  // namespace

std::optional<double> poc_coupled_error(const RunConfig& cfg, std::size_t N, std::size_t rep) {
    require(N >= 1 && N <= cfg.N_ref, "poc: N must lie in [1, N_ref]");
    const PocSystems sys = poc_setup(cfg, rep);
    const auto ref = poc_run(cfg, sys, cfg.N_ref);
    const auto small = poc_run(cfg, sys, N);
    if (!ref || !small) return std::nullopt;
    return poc_gap(cfg, *small, *ref);
}

RateReport run_poc_rate(const RunConfig& cfg) {
    require(cfg.sizes.size() >= 2, "poc: need at least two sizes");
    for (std::size_t s : cfg.sizes)
        require(s >= 1 && s < cfg.N_ref, fmt::format("poc: N_ref = {} is not larger than size {}", cfg.N_ref, s));
    const ModelPtr model = make_model(cfg.model);
    const bool sharp = model->measure_mode() == MeasureMode::pairwise;

    struct Rep {
        std::vector<double> e;
        std::vector<char> diverged;
    };
    auto rep_body = [&](std::size_t m) {
        Rep rep{std::vector<double>(cfg.sizes.size(), 0.0), std::vector<char>(cfg.sizes.size(), 0)};
        const PocSystems sys = poc_setup(cfg, m);
        const auto ref = poc_run(cfg, sys, cfg.N_ref);
        for (std::size_t a = 0; a < cfg.sizes.size(); ++a) {
            const auto small = ref ? poc_run(cfg, sys, cfg.sizes[a]) : std::nullopt;
            if (!small) {
                rep.diverged[a] = 1;
                continue;
            }
            rep.e[a] = poc_gap(cfg, *small, *ref);
        }
        return rep;
    };
    const auto reps = for_each_rep<Rep>(cfg.reps, rep_body);

    RateReport report;
    report.name = "poc_rate";
    report.level_name = "N";
    std::vector<double> ns, errs;
    std::size_t diverged_total = 0;
    bool any_zero = false;
    for (std::size_t a = 0; a < cfg.sizes.size(); ++a) {
        std::vector<double> samples;
        std::size_t diverged = 0;
        for (const Rep& r : reps) {
            if (r.diverged[a]) ++diverged;
            else samples.push_back(r.e[a]);
        }
        diverged_total += diverged;
        LevelError row{static_cast<double>(cfg.sizes[a]), kInf, 0.0, diverged};
        if (!samples.empty()) {
            const double mean = mean_of(samples);
            row.error = std::sqrt(mean);
            row.stderr_ = mean > 0.0 ? standard_error(samples) / (2.0 * row.error) : 0.0;
        }
        if (!(row.error > 0.0)) any_zero = true;
        ns.push_back(static_cast<double>(cfg.sizes[a]));
        errs.push_back(row.error);
        report.rows.push_back(row);
    }

    bool monotone = true;
    for (std::size_t a = 1; a < report.rows.size(); ++a) {
        const auto& prev = report.rows[a - 1];
        const auto& cur = report.rows[a];
        const double slack = 2.0 * std::hypot(prev.stderr_, cur.stderr_);
        if (cur.error > prev.error + slack) monotone = false;
    }

    Json checks = Json::object();
    checks["monotone_within_2se"] = monotone;
    if (any_zero || std::any_of(errs.begin(), errs.end(), [](double e) { return !std::isfinite(e); })) {
        report.verdict = Verdict::degenerate;
        report.warnings.push_back("some size has zero or non-finite error; the fit is skipped");
    } else {
        report.fit = fit_loglog_slope(ns, errs);
        const bool in_band = report.fit->slope >= cfg.slope_min && report.fit->slope <= cfg.slope_max;
        const bool r2_ok = report.fit->r_squared >= cfg.r2_min;
        checks["slope_in_band"] = in_band;
        checks["r_squared_ok"] = r2_ok;
        checks["no_divergence"] = diverged_total == 0;
        if (!sharp) {
            report.verdict = Verdict::exploratory;
            report.warnings.push_back(
                "functional measure dependence: dimension-dependent regime, reported without a verdict");
        } else {
            report.verdict = in_band && r2_ok && diverged_total == 0 ? Verdict::pass : Verdict::fail;
        }
    }
    report.details["N_ref"] = cfg.N_ref;
    report.details["estimator"] =
        "RMS of X^{i,N}_T - X^{i,N_ref}_T; both systems share Brownian streams and initial values";
    report.details["diverged_total"] = diverged_total;
    report.details["checks"] = checks;
    return report;
}

// ---------------------------------------------------------------------------
// Moment stability: tamed versus plain Euler on one tableau.
// ---------------------------------------------------------------------------

RateReport run_moment_stability(const RunConfig& cfg) {
    const ModelPtr model = make_model(cfg.model);
    const std::size_t N = cfg.N, d = model->d();
    const TimeGrid grid(cfg.T, cfg.n);
    const BrownianTableau tab = make_tableau(cfg, cfg.seed, N, model->l(), cfg.n);
    const ParticleEnsemble x0 = sample_initial(cfg.initial, N, d, cfg.seed);
    const TamedModel tm(model, cfg.n, cfg.taming);

    struct Track {
        std::vector<double> moments;
        std::vector<double> first_iterates;  // particle 0, component 0, steps 0..3
        SimulationResult result{ParticleEnsemble(1, 1), false, 0, 0};
    };
    auto run = [&](SchemeKind kind) {
        Track t;
        SimulationOptions o = sim_options(cfg, kind);
        o.observer = [&](const ParticleEnsemble& e, std::size_t k) {
            t.moments.push_back(empirical_moment(e, cfg.p0));
            if (k <= 3) t.first_iterates.push_back(e.particle(0)[0]);
        };
        t.result = simulate(tm, grid, &tab, x0, o);
        return t;
    };
    const Track tamed = run(SchemeKind::tamed_euler);
    const Track plain = run(SchemeKind::plain_euler);

    auto sup = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s = std::isfinite(x) ? std::max(s, x) : kInf;
        return s;
    };
    const bool tamed_finite = !tamed.result.diverged &&
                              std::all_of(tamed.moments.begin(), tamed.moments.end(),
                                          [](double m) { return std::isfinite(m); });

    RateReport report;
    report.name = "moment_stability";
    report.level_name = "n";
    report.rows.push_back({static_cast<double>(cfg.n), sup(tamed.moments), 0.0,
                           static_cast<std::size_t>(tamed.result.diverged)});
    report.rows.push_back({static_cast<double>(cfg.n), sup(plain.moments), 0.0,
                           static_cast<std::size_t>(plain.result.diverged)});
    report.verdict = tamed_finite ? Verdict::pass : Verdict::fail;

    std::string series = "step,time,tamed_moment,plain_moment\n";
    for (std::size_t k = 0; k < tamed.moments.size() || k < plain.moments.size(); ++k) {
        const std::string a = k < tamed.moments.size() ? num(tamed.moments[k]) : "";
        const std::string b = k < plain.moments.size() ? num(plain.moments[k]) : "";
        series += fmt::format("{},{},{},{}\n", k, num(grid.time(k)), a, b);
    }
    report.extra_files.emplace_back("moment_stability_series.csv", series);

    auto track_json = [&](const Track& t) {
        Json j{{"sup_moment", sup(t.moments)},
               {"diverged", t.result.diverged},
               {"steps_taken", t.result.steps_taken},
               {"first_iterates", t.first_iterates}};
        j["divergence_step"] = t.result.diverged ? Json(t.result.divergence_step) : Json(nullptr);
        return j;
    };
    report.details["p0"] = cfg.p0;
    report.details["rows"] = "first row tamed_euler, second row plain_euler; error = sup of the p0 moment";
    report.details["tamed"] = track_json(tamed);
    report.details["plain"] = track_json(plain);
    if (!tamed.result.diverged && !plain.result.diverged) {
        double gap = 0.0;
        const auto& a = tamed.result.final_state.states();
        const auto& b = plain.result.final_state.states();
        for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
        report.details["final_max_gap"] = gap;
    } else {
        report.details["final_max_gap"] = nullptr;
    }
    report.details["checks"] = Json{{"tamed_moments_finite", tamed_finite},
                                    {"plain_diverged", plain.result.diverged}};
    return report;
}

// ---------------------------------------------------------------------------
// Ergodic contraction: synchronous coupling of two initial laws.
// ---------------------------------------------------------------------------

RateReport run_ergodic_contraction(const RunConfig& cfg) {
    const ModelPtr model = make_model(cfg.model);
    const std::size_t N = cfg.N, d = model->d();
    const TimeGrid grid(cfg.T, cfg.n);
    const ErgodicConstants constants = ergodic_constants(cfg.constants);
    if (auto violation = ergodic_step_violation(grid.h, constants)) throw ContractViolation("ergodic: " + *violation);

    std::vector<std::size_t> log_steps = {0};
    for (std::size_t k = 1; k < grid.total_steps; k *= 2) log_steps.push_back(k);
    log_steps.push_back(grid.total_steps);

    std::vector<std::size_t> stab_steps;
    for (double s : cfg.stabilization_times) {
        const std::size_t k = steps_for(s, cfg.n);
        require(2 * k <= grid.total_steps, "ergodic: stabilization time beyond the horizon");
        stab_steps.push_back(k);
        stab_steps.push_back(2 * k);
    }

    const BrownianTableau tab = make_tableau(cfg, cfg.seed, N, model->l(), cfg.n);
    const TamedModel tm(model, cfg.n, cfg.taming);

    struct Path {
        std::map<std::size_t, ParticleEnsemble> snapshots;
        SimulationResult result{ParticleEnsemble(1, 1), false, 0, 0};
    };
    auto run = [&](const InitialLaw& law) {
        Path p;
        SimulationOptions o = sim_options(cfg, cfg.kind);
        o.observer = [&](const ParticleEnsemble& e, std::size_t k) {
            const bool wanted = std::find(log_steps.begin(), log_steps.end(), k) != log_steps.end() ||
                                std::find(stab_steps.begin(), stab_steps.end(), k) != stab_steps.end();
            if (wanted) p.snapshots.insert_or_assign(k, e);
        };
        p.result = simulate(tm, grid, &tab, sample_initial(law, N, d, cfg.seed), o);
        return p;
    };
    const Path X = run(cfg.initial);
    const Path Y = run(cfg.initial_b);

    const W2Options wo = w2_options(cfg);
    RateReport report;
    report.name = "ergodic";
    report.level_name = "t";
    std::vector<double> ts, w2s;
    for (std::size_t k : log_steps) {
        auto a = X.snapshots.find(k), b = Y.snapshots.find(k);
        if (a == X.snapshots.end() || b == Y.snapshots.end()) break;
        LevelError row{grid.time(k), kInf, 0.0, 0};
        if (a->second.overflowed() || b->second.overflowed()) {
            row.diverged = 1;
        } else {
            const W2Result r = w2(a->second.measure(), b->second.measure(), cfg.method, wo);
            row.error = r.value;
            row.stderr_ = r.stderr_;
        }
        report.rows.push_back(row);
        ts.push_back(row.level);
        w2s.push_back(row.error);
    }
    const bool diverged = X.result.diverged || Y.result.diverged;

    Json stabilization = Json::array();
    std::vector<double> stab_values;
    for (std::size_t s = 0; s + 1 < stab_steps.size(); s += 2) {
        auto a = X.snapshots.find(stab_steps[s]), b = X.snapshots.find(stab_steps[s + 1]);
        double v = kInf;
        if (a != X.snapshots.end() && b != X.snapshots.end() && !a->second.overflowed() &&
            !b->second.overflowed())
            v = w2(a->second.measure(), b->second.measure(), cfg.method, wo).value;
        stab_values.push_back(v);
        stabilization.push_back({{"s", grid.time(stab_steps[s])}, {"w2_s_2s", v}});
    }
    bool stab_decreasing = true;
    for (std::size_t i = 1; i < stab_values.size(); ++i)
        if (!(stab_values[i] < stab_values[i - 1])) stab_decreasing = false;

    Json checks = Json::object();
    checks["stabilization_decreasing"] = stab_decreasing;
    checks["no_divergence"] = !diverged;

    // Decaying segment: from t = 0 to the minimum of the series.
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < w2s.size(); ++i)
        if (w2s[i] < w2s[argmin]) argmin = i;
    std::vector<double> fit_t, fit_log;
    for (std::size_t i = 0; i <= argmin && i < w2s.size(); ++i)
        if (w2s[i] > 0.0 && std::isfinite(w2s[i])) {
            fit_t.push_back(ts[i]);
            fit_log.push_back(std::log(w2s[i]));
        }
    const double w2_0 = w2s.empty() ? 0.0 : w2s.front();
    const double w2_T = w2s.empty() ? 0.0 : w2s.back();
    if (diverged) {
        report.verdict = Verdict::fail;
    } else if (fit_t.size() < 2) {
        report.verdict = Verdict::degenerate;
        report.warnings.push_back("fewer than two positive W2 values on the decaying segment; no fit");
    } else {
        report.fit = fit_linear(fit_t, fit_log);
        const bool negative = report.fit->slope < 0.0;
        const bool r2_ok = report.fit->r_squared >= cfg.r2_min;
        const bool ratio_ok = w2_T < cfg.w2_ratio_max * w2_0;
        checks["negative_slope"] = negative;
        checks["r_squared_ok"] = r2_ok;
        checks["w2_ratio_ok"] = ratio_ok;
        report.verdict = negative && r2_ok && ratio_ok ? Verdict::pass : Verdict::fail;
    }

    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    report.details["fit_segment_end"] = ts.empty() ? Json(nullptr) : Json(ts[argmin]);
    report.details["w2_initial"] = w2_0;
    report.details["w2_final"] = w2_T;
    report.details["w2_ratio"] = w2_0 > 0.0 ? Json(w2_T / w2_0) : Json(nullptr);
    report.details["decay_rate"] = report.fit ? Json(-report.fit->slope) : Json(nullptr);
    report.details["stabilization"] = stabilization;
    report.details["theory"] = Json{{"rho1", opt(constants.rho1)},
                                    {"rho2", opt(constants.rho2)},
                                    {"h_star", opt(constants.h_star)},
                                    {"h", grid.h}};
    report.details["w2_method"] = to_string(cfg.method);
    report.details["w2_approximate"] = cfg.method == W2Method::sliced;
    report.details["checks"] = checks;
    return report;
}

// ---------------------------------------------------------------------------
// Plain simulation and assumption probes.
// ---------------------------------------------------------------------------

RateReport run_simulate(const RunConfig& cfg) {
    const ModelPtr model = make_model(cfg.model);
    const TimeGrid grid(cfg.T, cfg.n);
    const BrownianTableau tab = make_tableau(cfg, cfg.seed, cfg.N, model->l(), cfg.n);
    const TamedModel tm(model, cfg.n, cfg.taming);
    std::string series = "step,time,moment_p0,w2_to_origin\n";
    SimulationOptions o = sim_options(cfg, cfg.kind);
    o.observer = [&](const ParticleEnsemble& e, std::size_t k) {
        series += fmt::format("{},{},{},{}\n", k, num(grid.time(k)), num(empirical_moment(e, cfg.p0)),
                              num(w2_to_origin(e)));
    };
    const SimulationResult r = simulate(tm, grid, &tab, sample_initial(cfg.initial, cfg.N, model->d(), cfg.seed), o);

    RateReport report;
    report.name = "simulate";
    report.level_name = "step";
    report.verdict = r.diverged ? Verdict::fail : Verdict::pass;
    std::ostringstream snap;
    snapshot_csv(r.final_state, grid.time(r.steps_taken), snap);
    report.extra_files.emplace_back("simulate_series.csv", series);
    report.extra_files.emplace_back("simulate_final.csv", snap.str());
    report.details["diverged"] = r.diverged;
    report.details["steps_taken"] = r.steps_taken;
    report.details["divergence_step"] = r.diverged ? Json(r.divergence_step) : Json(nullptr);
    return report;
}

RateReport run_probe(const RunConfig& cfg) {
    const ModelPtr model = make_model(cfg.model);
    ProbeSpec spec;
    spec.count = cfg.probe_samples;
    spec.radius = cfg.probe_radius;
    spec.seed = cfg.probe_seed;
    spec.exponents = {cfg.probe_p0, cfg.probe_p1};
    spec.constants = cfg.constants;

    std::vector<AssumptionSet> sets;
    if (cfg.probe_set == "all") {
        for (AssumptionSet s : all_assumption_sets())
            if (model->documented_constants(s, spec.exponents)) sets.push_back(s);
    } else {
        sets.push_back(assumption_set_from_string(cfg.probe_set));
    }

    RateReport report;
    report.name = "probe";
    report.level_name = "set";
    bool all_hold = true;
    Json results = Json::array();
    for (AssumptionSet s : sets) {
        const AssumptionReport ar = probe_assumptions(*model, s, spec);
        all_hold = all_hold && ar.holds();
        Json ineqs = Json::array();
        for (const auto& rec : ar.inequalities) {
            Json consts = Json::object();
            for (std::size_t c = 0; c < rec.constants.size(); ++c) consts[rec.constant_names[c]] = rec.constants[c];
            ineqs.push_back({{"assumption_id", rec.assumption_id},
                             {"sample_count", rec.sample_count},
                             {"worst_margin", rec.worst_margin},
                             {"fitted_constant", rec.fitted_constant ? Json(*rec.fitted_constant) : Json(nullptr)},
                             {"fitted_name", rec.constant_names.empty() ? Json(nullptr)
                                                                        : Json(rec.constant_names.front())},
                             {"constants", consts},
                             {"holds", rec.holds}});
        }
        results.push_back({{"set", to_string(s)}, {"holds", ar.holds()}, {"inequalities", ineqs}});
    }
    report.verdict = all_hold ? Verdict::pass : Verdict::fail;
    report.details["probe"] = Json{{"count", spec.count},
                                   {"radius", spec.radius},
                                   {"seed", spec.seed},
                                   {"p0", spec.exponents.p0},
                                   {"p1", spec.exponents.p1}};
    report.details["results"] = results;
    return report;
}

RateReport run_experiment(const RunConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::simulate: return run_simulate(cfg);
        case ExperimentKind::strong_rate: return run_strong_rate(cfg);
        case ExperimentKind::poc_rate: return run_poc_rate(cfg);
        case ExperimentKind::moment_stability: return run_moment_stability(cfg);
        case ExperimentKind::ergodic: return run_ergodic_contraction(cfg);
        case ExperimentKind::probe: return run_probe(cfg);
    }
    throw ContractViolation("unknown experiment");
}

// ---------------------------------------------------------------------------
// Output.
// ---------------------------------------------------------------------------

std::string errors_csv(const RateReport& report) {
    std::string s = "level,error,stderr,diverged_count\n";
    for (const auto& r : report.rows)
        s += fmt::format("{},{},{},{}\n", num(r.level), num(r.error), num(r.stderr_), r.diverged);
    return s;
}

Json report_json(const RateReport& report, const RunConfig& cfg) {
    Json rows = Json::array();
    for (const auto& r : report.rows)
        rows.push_back({{report.level_name, r.level},
                        {"error", std::isfinite(r.error) ? Json(r.error) : Json("inf")},
                        {"stderr", r.stderr_},
                        {"diverged_count", r.diverged}});
    Json j{{"experiment", to_string(cfg.experiment)},
           {"version", kVersion},
           {"verdict", to_string(report.verdict)},
           {"fit", report.fit ? fit_json(*report.fit) : Json(nullptr)},
           {"levels", rows},
           {"warnings", report.warnings}};
    for (const auto& [k, v] : report.details.items()) j[k] = v;
    j["config"] = config_echo(cfg);
    return j;
}

void write_report(const RateReport& report, const RunConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (fs::path(out_dir) / name).string());
        f << body;
    };
    if (!report.rows.empty()) write(report.name + "_errors.csv", errors_csv(report));
    write(report.name + "_report.json", report_json(report, cfg).dump(2) + "\n");
    for (const auto& [name, body] : report.extra_files) write(name, body);
}

}  // namespace mvsde
