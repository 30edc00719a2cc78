#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mvsde/experiments.hpp"
#include "mvsde/scheme.hpp"
#include "oracles.hpp"

using namespace mvsde;

namespace {

RunConfig ou_strong_config() {
    RunConfig c = default_config(ExperimentKind::strong_rate);
    c.model = {"lipschitz-baseline", 1, 1, std::nullopt, {{"alpha", 1.0}, {"nu", 0.5}}};
    c.taming = TamingVariant::off;
    c.initial = {InitialLaw::Kind::point, 1.0, 0.0};
    c.levels = {8, 16, 32, 64};
    c.n_max = 256;
    c.N = 64;
    c.reps = 16;
    c.error_norm = "terminal";
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("strong error of Euler on Ornstein-Uhlenbeck matches the closed form") {
    const RunConfig c = ou_strong_config();
    const RateReport r = run_strong_rate(c);
    REQUIRE(r.rows.size() == 4);
    const double samples = double(c.N * c.reps);
    for (const auto& row : r.rows) {
        const double expected = oracle::ou_euler_self_gap(1.0, 0.5, 1.0, 1.0, std::size_t(row.level), c.n_max);
        INFO("n=", row.level, " got ", row.error, " expected ", expected);
        // RMS of a centred Gaussian from `samples` draws: relative sd about 1/sqrt(2 samples).
        CHECK(std::abs(row.error / expected - 1.0) < 5.0 / std::sqrt(2.0 * samples));
        CHECK(row.diverged == 0);
    }
    REQUIRE(r.fit);
    CHECK(r.fit->slope > 0.85);
    CHECK(r.fit->slope < 1.15);
}

TEST_CASE("zero model gives a degenerate strong-rate report") {
    RunConfig c = default_config(ExperimentKind::strong_rate);
    c.model = {"zero", 1, 1, std::nullopt, {}};
    c.levels = {4, 8};
    c.n_max = 16;
    c.reps = 2;
    c.N = 4;
    const RateReport r = run_strong_rate(c);
    CHECK(r.verdict == Verdict::degenerate);
    CHECK_FALSE(r.fit);
    for (const auto& row : r.rows) CHECK(row.error == 0.0);
}

TEST_CASE("coupled PoC error vanishes when N equals N_ref") {
    RunConfig c = default_config(ExperimentKind::poc_rate);
    c.N_ref = 32;
    c.n = 8;
    const auto same = poc_coupled_error(c, 32, 0);
    REQUIRE(same);
    CHECK(*same == 0.0);
    const auto smaller = poc_coupled_error(c, 8, 0);
    REQUIRE(smaller);
    CHECK(*smaller > 0.0);
}

TEST_CASE("PoC driver refuses a reference that is not larger") {
    RunConfig c = default_config(ExperimentKind::poc_rate);
    c.sizes = {16, 32};
    c.N_ref = 32;
    CHECK_THROWS_AS(run_poc_rate(c), ContractViolation);
}

TEST_CASE("PoC rate on a small pairwise system") {
    RunConfig c = default_config(ExperimentKind::poc_rate);
    c.sizes = {8, 16, 32, 64};
    c.N_ref = 256;
    c.n = 16;
    c.reps = 4;
    const RateReport r = run_poc_rate(c);
    REQUIRE(r.fit);
    CHECK(r.fit->slope < 0.0);
    CHECK(r.verdict != Verdict::exploratory);

    c.model = {"cubic-mean-field", 1, 1, std::nullopt, {}};
    CHECK(run_poc_rate(c).verdict == Verdict::exploratory);
}

TEST_CASE("moment stability separates tamed and plain Euler") {
    RunConfig c = default_config(ExperimentKind::moment_stability);
    c.model = {"cubic-mean-field", 1, 1, std::nullopt, {{"lambda", 0}, {"kappa", 0}, {"c_g", 0}, {"nu", 0}}};
    c.initial = {InitialLaw::Kind::point, 3.0, 0.0};
    const RateReport r = run_moment_stability(c);
    CHECK(r.verdict == Verdict::pass);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].diverged == 0);
    CHECK(r.rows[1].diverged == 1);
    const auto& plain = r.details["plain"];
    CHECK(plain["first_iterates"][1].get<double>() == -10.5);
    CHECK(plain["first_iterates"][2].get<double>() == 568.3125);
    CHECK(plain["divergence_step"].get<std::size_t>() <= 20);
    REQUIRE(r.extra_files.size() == 1);
    CHECK(r.extra_files[0].second.rfind("step,time,tamed_moment,plain_moment\n0,0,81,81\n", 0) == 0);
}

TEST_CASE("ergodic driver refuses step sizes beyond the bound") {
    RunConfig c = default_config(ExperimentKind::ergodic);
    c.constants = {{"hatL_bs1", 1}, {"hatL_bs2", 0}, {"L_fg1", 0}, {"L_b1", 0}, {"L_b2", 0}, {"L_f1", 0}};
    c.n = 1;  // h = 1 >= 1/(2 rho1) = 1/2
    CHECK_THROWS_AS(run_ergodic_contraction(c), ContractViolation);
}

TEST_CASE("ergodic contraction on a small system") {
    RunConfig c = default_config(ExperimentKind::ergodic);
    c.N = 32;
    c.T = 10.0;
    c.n = 20;
    c.stabilization_times = {1.0, 4.0};
    const RateReport r = run_ergodic_contraction(c);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.rows.front().level == 0.0);
    CHECK(r.rows.back().level == 10.0);
    CHECK(r.rows.back().error < r.rows.front().error);
}

TEST_CASE("probe driver over every documented set") {
    RunConfig c = default_config(ExperimentKind::probe);
    c.probe_samples = 500;
    CHECK(run_probe(c).verdict == Verdict::pass);
    c.model = {"cubic-unstable", 1, 1, std::nullopt, {}};
    c.probe_set = "one_sided_lipschitz";
    CHECK(run_probe(c).verdict == Verdict::fail);
}

TEST_CASE("errors csv format") {
    RateReport r;
    r.rows = {{16, 0.25, 0.01, 0}, {32, 0.125, 0.005, 2}};
    CHECK(errors_csv(r) == "level,error,stderr,diverged_count\n16,0.25,0.01,0\n32,0.125,0.005,2\n");
}

TEST_CASE("reports are independent of the thread count") {
    RunConfig c = ou_strong_config();
    c.reps = 6;
    c.model = {"cubic-mean-field", 1, 1, std::nullopt, {}};
    c.taming = TamingVariant::finite;
    const auto dir = std::filesystem::temp_directory_path() / "mvsde_threads_test";
    std::filesystem::remove_all(dir);
    set_thread_count(1);
    write_report(run_strong_rate(c), c, (dir / "a").string());
    set_thread_count(4);
    write_report(run_strong_rate(c), c, (dir / "b").string());
    set_thread_count(1);
    for (const char* f : {"strong_rate_errors.csv", "strong_rate_report.json"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    CHECK(slurp(dir / "a" / "strong_rate_report.json").find("\"verdict\"") != std::string::npos);
    std::filesystem::remove_all(dir);
}
