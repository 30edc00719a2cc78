// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "mvsde/cli.hpp"
#include "mvsde/config.hpp"
#include "mvsde/experiments.hpp"
#include "mvsde/probe.hpp"
#include "mvsde/scheme.hpp"
#include "oracles.hpp"

using namespace mvsde;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const fs::path kWork = fs::temp_directory_path() / "mvsde_acceptance";

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<double> normals(std::uint64_t seed, std::uint64_t index, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; k += 2) {
        const auto z = counter_normal_pair(seed, StreamDomain::probe, index, 0, static_cast<std::uint32_t>(k / 2));
        v[k] = z[0];
        if (k + 1 < count) v[k + 1] = z[1];
    }
    return v;
}

const char* kStrongConfig = R"(config_version = 1
experiment = strong-rate

[model]
family = cubic-mean-field
d = 1

[grid]
T = 1
levels = 16, 32, 64, 128, 256, 512
n_max = 1024

[ensemble]
N = 64
initial = gaussian
initial_spread = 0.5

[metrics]
p = 2

[run]
seed = 1
reps = 32
)";

int run_strong_cli(int threads, const fs::path& out) {
    const fs::path cfg = kWork / "strong_rate.ini";
    std::ofstream(cfg) << kStrongConfig;
    const std::string t = std::to_string(threads);
    const std::string c = cfg.string(), o = out.string();
    const char* argv[] = {"mvsde", "strong-rate", c.c_str(), "--threads", t.c_str(), "--out", o.c_str()};
    std::ostringstream sink_out, sink_err;
    return run_cli(7, argv, sink_out, sink_err);
}

// 1. Strong rate 1/2 on the cubic mean-field model.
Outcome strong_rate() {
    const fs::path out = kWork / "strong_t1";
    const int code = run_strong_cli(1, out);
    if (code == kExitError) return {false, "CLI error"};
    const auto j = nlohmann::json::parse(slurp(out / "strong_rate_report.json"));
    if (j["fit"].is_null()) return {false, "no fit"};
    const double slope = j["fit"]["slope"], r2 = j["fit"]["r_squared"];
    const std::size_t diverged = j["diverged_total"];
    const bool ok = slope >= 0.40 && slope <= 0.60 && r2 >= 0.95 && diverged == 0;
    return {ok, fmt::format("slope={:.4f} r2={:.4f} diverged={}", slope, r2, diverged)};
}

// 2. Propagation-of-chaos rate in d = 1 and d = 3.
Outcome poc_rate() {
    double slopes[2] = {0, 0};
    bool ok = true;
    std::string detail;
    for (int k = 0; k < 2; ++k) {
        RunConfig c = default_config(ExperimentKind::poc_rate);
        c.model = {"pairwise-vlasov", k == 0 ? 1u : 3u, k == 0 ? 1u : 3u, std::nullopt, {}};
        c.T = 1.0;
        c.sizes = {16, 32, 64, 128, 256};
        c.N_ref = 1024;
        c.reps = 16;
        const RateReport r = run_poc_rate(c);
        if (!r.fit) return {false, "no fit"};
        slopes[k] = r.fit->slope;
        ok = ok && slopes[k] >= -0.65 && slopes[k] <= -0.35 && r.verdict == Verdict::pass;
        detail += fmt::format("d={} slope={:.4f} ", c.model.d, slopes[k]);
    }
    ok = ok && std::abs(slopes[1] - slopes[0]) <= 0.15;
    return {ok, detail + fmt::format("|diff|={:.4f}", std::abs(slopes[1] - slopes[0]))};
}

// 3. Tamed moments stay finite where plain Euler blows up.
Outcome moment_stability() {
    RunConfig c = default_config(ExperimentKind::moment_stability);
    c.model = {"cubic-mean-field", 1, 1, std::nullopt, {{"lambda", 0}, {"kappa", 0}, {"c_g", 0}, {"nu", 0.5}}};
    c.n = 2;
    c.T = 100;
    c.N = 64;
    c.p0 = 4;
    c.initial = {InitialLaw::Kind::gaussian, 0.0, 3.0};
    const RateReport stochastic = run_moment_stability(c);
    const bool tamed_finite = stochastic.details["checks"]["tamed_moments_finite"].get<bool>() &&
                              stochastic.details["tamed"]["steps_taken"].get<std::size_t>() == 200;

    c.model.params["nu"] = 0.0;
    c.initial = {InitialLaw::Kind::point, 3.0, 0.0};
    const RateReport det = run_moment_stability(c);
    const auto& plain = det.details["plain"];
    const double x1 = plain["first_iterates"][1], x2 = plain["first_iterates"][2];
    const bool diverged = plain["diverged"].get<bool>() && plain["divergence_step"].get<std::size_t>() <= 20;
    const bool ok = tamed_finite && diverged && x1 == -10.5 && x2 == 568.3125;
    return {ok, fmt::format("tamed sup moment={:.4g}; plain x1={} x2={} diverged at step {}",
                            stochastic.rows[0].error, x1, x2, plain["divergence_step"].dump())};
}

// 4. W2 contraction of two synchronously coupled systems.
Outcome ergodic() {
    RunConfig c = default_config(ExperimentKind::ergodic);
    c.model = {"ergodic-dissipative", 1, 1, std::nullopt, {}};
    c.taming = TamingVariant::ergodic;
    c.initial = {InitialLaw::Kind::gaussian, 0.0, 1.0};
    c.initial_b = {InitialLaw::Kind::gaussian, 5.0, 1.0};
    c.N = 256;
    c.n = 100;
    c.T = 20;
    const RateReport r = run_ergodic_contraction(c);
    if (!r.fit) return {false, "no fit"};
    const double w0 = r.rows.front().error, wT = r.rows.back().error;
    const bool ok = r.fit->slope < 0.0 && r.fit->r_squared >= 0.9 && wT < 0.05 * w0;
    return {ok, fmt::format("slope={:.4f} r2={:.4f} W2(0)={:.4g} W2(T)={:.4g}", r.fit->slope, r.fit->r_squared, w0,
                            wT)};
}

// 5. W2 solvers against brute force and against each other.
Outcome metric_oracles() {
    double worst_brute = 0.0, worst_sorted = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t n = 1 + s % 7, d = 1 + s % 3;
        const auto a = normals(11, 2 * s, n * d), b = normals(11, 2 * s + 1, n * d);
        const double exact = w2(EmpiricalMeasure(a, d), EmpiricalMeasure(b, d), W2Method::exact_assignment).value;
        worst_brute = std::max(worst_brute, std::abs(exact - oracle::brute_force_w2(a, b, d)));
    }
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t n = 1 + (s * 29) % 64;
        const auto a = normals(12, 2 * s, n), b = normals(12, 2 * s + 1, n);
        const EmpiricalMeasure ma(a, 1), mb(b, 1);
        worst_sorted = std::max(worst_sorted, std::abs(w2(ma, mb, W2Method::sorted_1d).value -
                                                       w2(ma, mb, W2Method::exact_assignment).value));
    }
    return {worst_brute <= 1e-10 && worst_sorted <= 1e-10,
            fmt::format("max |exact - brute| = {:.2e}, max |sorted - exact| = {:.2e}", worst_brute, worst_sorted)};
}

// 6. Taming algebra on random points.
Outcome taming_algebra() {
    const std::vector<std::size_t> levels = {1, 4, 16, 256};
    std::size_t violations = 0, checked = 0;
    for (const auto& family : model_families()) {
        const std::size_t d = 2;
        const ModelPtr m = make_model({family, d, d, std::nullopt, {}});
        std::vector<double> b(d), bn(d), f(d), fr(d);
        for (std::uint64_t s = 0; s < 10000; ++s) {
            const auto raw = normals(13, s, 6 * d);
            std::vector<double> x(raw.begin(), raw.begin() + d), y(raw.begin() + d, raw.begin() + 2 * d);
            const double scale = 0.01 + 4.0 * double(s % 100) / 100.0;
            for (auto& v : x) v *= scale;
            for (auto& v : y) v *= scale;
            const std::vector<double> atoms(raw.begin() + 2 * d, raw.end());
            const EmpiricalMeasure mu(atoms, d);
            m->drift(0.0, x, mu, b);
            const double nb = norm(b), r = norm(x);
            double prev = 0.0;
            for (std::size_t n : levels) {
                const TamedModel tm(m, n, TamingVariant::finite);
                tm.drift(0.0, x, mu, bn);
                const double nbn = norm(bn);
                ++checked;
                if (nbn > nb) ++violations;
                if (r > 0.0 && nbn > std::sqrt(double(n)) * nb / std::pow(r, 2.0 * m->q())) ++violations;
                if (nbn < prev) ++violations;
                prev = nbn;
                if (m->f_antisymmetric()) {
                    tm.kernel_f(x, y, f);
                    tm.kernel_f(y, x, fr);
                    for (std::size_t k = 0; k < d; ++k)
                        if (f[k] != -fr[k]) ++violations;
                }
            }
        }
    }
    return {violations == 0, fmt::format("{} level-point checks over {} families, {} violations", checked,
                                         model_families().size(), violations)};
}

// 7. Refinement coupling of the Brownian tableau.
Outcome refinement() {
    const std::size_t n_max = 1024, particles = 4, l = 2;
    const double T = 2.0;
    const BrownianTableau tab(21, particles, l, T, n_max);
    std::size_t mismatches = 0;
    std::vector<double> v(l), w(l);
    for (std::size_t p = 0; p < particles; ++p) {
        std::vector<double> finest_total(l, 0.0);
        for (std::size_t k = 0; k < steps_for(T, n_max); ++k)
            for (std::size_t c = 0; c < l; ++c) finest_total[c] += tab.finest(p, c, k);
        for (std::size_t n = 1; n <= n_max; n *= 2) {
            std::vector<double> total(l, 0.0);
            for (std::size_t k = 0; k < steps_for(T, n); ++k) {
                tab.increment(n, p, k, v);
                for (std::size_t c = 0; c < l; ++c) total[c] += v[c];
                if (n == n_max) continue;
                std::vector<double> sum(l, 0.0);
                for (std::size_t kk = 0; kk < 2; ++kk) {
                    tab.increment(2 * n, p, 2 * k + kk, w);
                    for (std::size_t c = 0; c < l; ++c) sum[c] += w[c];
                }
                if (sum != v) ++mismatches;
            }
            if (total != finest_total) ++mismatches;
        }
    }
    return {mismatches == 0, fmt::format("levels 1..{} on T = {}, {} mismatches", n_max, T, mismatches)};
}

// 8. Byte-identical strong-rate outputs at 1 and 8 threads.
Outcome determinism() {
    const fs::path out1 = kWork / "strong_t1", out8 = kWork / "strong_t8";
    if (!fs::exists(out1 / "strong_rate_report.json") && run_strong_cli(1, out1) == kExitError)
        return {false, "CLI error"};
    if (run_strong_cli(8, out8) == kExitError) return {false, "CLI error"};
    bool same = true;
    for (const char* f : {"strong_rate_errors.csv", "strong_rate_report.json"})
        same = same && slurp(out1 / f) == slurp(out8 / f) && !slurp(out1 / f).empty();
    return {same, same ? "CSV and JSON identical" : "outputs differ"};
}

// 9. Assumption probes.
Outcome probes() {
    ProbeSpec spec;
    spec.count = 10000;
    spec.radius = 5.0;
    spec.seed = 1;
    std::size_t sets = 0;
    bool ok = true;
    for (const char* family : {"cubic-mean-field", "pairwise-vlasov"}) {
        const ModelPtr m = make_model({family, 1, 1, std::nullopt, {}});
        for (AssumptionSet s : all_assumption_sets()) {
            if (!m->documented_constants(s, spec.exponents)) continue;
            ++sets;
            ok = ok && probe_assumptions(*m, s, spec).holds();
        }
    }
    const ModelPtr bad = make_model({"cubic-unstable", 1, 1, std::nullopt, {}});
    const auto r = probe_assumptions(*bad, AssumptionSet::one_sided_lipschitz, spec);
    const double margin = r.inequalities.front().worst_margin;
    ok = ok && sets > 0 && !r.holds() && margin > 0.0;
    return {ok, fmt::format("{} documented sets hold; cubic-unstable worst_margin={:.4g}", sets, margin)};
}

}  // namespace

int main() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 strong rate 1/2 (cubic-mean-field)", strong_rate},
        {"2 propagation-of-chaos rate, d = 1 and 3", poc_rate},
        {"3 moment stability vs plain Euler blow-up", moment_stability},
        {"4 ergodic W2 contraction", ergodic},
        {"5 W2 metric oracles", metric_oracles},
        {"6 taming algebra", taming_algebra},
        {"7 Brownian refinement coupling", refinement},
        {"8 determinism across thread counts", determinism},
        {"9 assumption probes", probes},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << fmt::format(" | {:.1f} s", secs)
                  << std::endl;
        if (!o.pass) ++failed;
    }
    fs::remove_all(kWork);
    std::cout << (failed == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failed)) << std::endl;
    return failed == 0 ? 0 : 1;
}
