#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "mvsde/cli.hpp"

using namespace mvsde;

namespace {

int cli(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
    args.insert(args.begin(), "mvsde");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("selftest passes") {
    std::string out;
    CHECK(cli({"selftest"}, &out) == kExitOk);
    CHECK(out.find("FAIL") == std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(cli({}) == kExitError);
    CHECK(cli({"no-such-command"}) == kExitError);
    CHECK(cli({"simulate", "/nonexistent/config.ini"}) == kExitError);
}

TEST_CASE("config errors are all printed and exit with 1") {
    const auto p = write_temp("mvsde_bad.ini", "config_version = 1\nexperiment = simulate\n[run]\nreps = 0\n"
                                               "[grid]\nT = -1\n");
    std::string err;
    CHECK(cli({"simulate", p.string()}, nullptr, &err) == kExitError);
    CHECK(err.find("reps") != std::string::npos);
    CHECK(err.find("T must be positive") != std::string::npos);
}

TEST_CASE("subcommand must match the config experiment") {
    const auto p = write_temp("mvsde_kind.ini", "config_version = 1\nexperiment = simulate\n");
    CHECK(cli({"ergodic", p.string()}) == kExitError);
}

TEST_CASE("simulate writes its outputs and honours overrides") {
    const auto dir = std::filesystem::temp_directory_path() / "mvsde_cli_sim";
    std::filesystem::remove_all(dir);
    const auto p = write_temp("mvsde_sim.ini", "config_version = 1\nexperiment = simulate\n[grid]\nT = 0.5\nn = 8\n"
                                               "[ensemble]\nN = 8\n");
    CHECK(cli({"simulate", p.string(), "--out", dir.string(), "--seed", "7", "--threads", "2"}) == kExitOk);
    CHECK(std::filesystem::exists(dir / "simulate_report.json"));
    CHECK(std::filesystem::exists(dir / "simulate_series.csv"));
    CHECK(std::filesystem::exists(dir / "simulate_final.csv"));
    std::ifstream f(dir / "simulate_report.json");
    std::stringstream s;
    s << f.rdbuf();
    CHECK(s.str().find("\"seed\": 7") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("a failing verdict exits with 2") {
    const auto dir = std::filesystem::temp_directory_path() / "mvsde_cli_probe";
    const auto p = write_temp("mvsde_probe.ini", "config_version = 1\nexperiment = probe-assumptions\n"
                                                 "[model]\nfamily = cubic-unstable\n"
                                                 "[probe]\nset = one_sided_lipschitz\ncount = 100\n");
    CHECK(cli({"probe-assumptions", p.string(), "--out", dir.string()}) == kExitVerdictFail);
    std::filesystem::remove_all(dir);
}
