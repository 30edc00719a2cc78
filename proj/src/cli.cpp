#include "mvsde/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mvsde/config.hpp"
#include "mvsde/experiments.hpp"
#include "mvsde/scheme.hpp"

namespace mvsde {

namespace {

struct Overrides {
    int threads = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("MVSDE_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

int run_config_command(ExperimentKind kind, const std::string& path, const Overrides& o, std::ostream& out,
                       std::ostream& err) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        err << "error: cannot open config file " << path << "\n";
        return kExitError;
    }
    std::stringstream text;
    text << file.rdbuf();

    ParsedConfig parsed;
    try {
        parsed = parse_config(text.str());
    } catch (const ConfigError& e) {
        for (const auto& m : e.messages()) err << "config error: " << m << "\n";
        return kExitError;
    }
    RunConfig& cfg = parsed.config;
    if (cfg.experiment != kind) {
        err << "error: config declares experiment = " << to_string(cfg.experiment) << " but the subcommand is "
            << to_string(kind) << "\n";
        return kExitError;
    }
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.out = *o.out;
    for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";

    set_thread_count(resolve_threads(o.threads));
    RateReport report;
    try {
        report = run_experiment(cfg);
        write_report(report, cfg, cfg.out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    for (const auto& w : report.warnings) err << "warning: " << w << "\n";
    for (const auto& r : report.rows)
        out << fmt::format("{}={:<10g} error={:.6e} stderr={:.3e} diverged={}\n", report.level_name, r.level,
                           r.error, r.stderr_, r.diverged);
    if (report.details.contains("results"))
        for (const auto& set : report.details["results"])
            for (const auto& ineq : set["inequalities"])
                out << fmt::format("{:<18} worst_margin={:<12.4g} holds={}\n",
                                   ineq["assumption_id"].get<std::string>(), ineq["worst_margin"].get<double>(),
                                   ineq["holds"].get<bool>());
    if (report.fit)
        out << fmt::format("fit: slope={:.4f} r2={:.4f}\n", report.fit->slope, report.fit->r_squared);
    out << "verdict: " << to_string(report.verdict) << "\n";
    return report.verdict == Verdict::fail ? kExitVerdictFail : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tamed Euler particle simulations of McKean-Vlasov SDEs", "mvsde"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Overrides o;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string config_path;

    const std::vector<std::pair<ExperimentKind, std::string>> commands = {
        {ExperimentKind::simulate, "Simulate one particle system and write its trajectory statistics"},
        {ExperimentKind::strong_rate, "Estimate the strong convergence rate in the step size"},
        {ExperimentKind::poc_rate, "Estimate the propagation-of-chaos rate in the particle count"},
        {ExperimentKind::moment_stability, "Compare moments of tamed and plain Euler"},
        {ExperimentKind::ergodic, "Measure W2 contraction between two coupled systems"},
        {ExperimentKind::probe, "Check the assumption inequalities of a model by sampling"},
    };
    std::vector<std::pair<CLI::App*, ExperimentKind>> subs;
    for (const auto& [kind, help] : commands) {
        CLI::App* sub = app.add_subcommand(to_string(kind), help);
        sub->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--threads", o.threads, "Worker threads (default: MVSDE_THREADS or 1)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Override [run] seed");
        sub->add_option("--out", out_dir, "Override [run] out");
        subs.emplace_back(sub, kind);
    }
    CLI::App* selftest = app.add_subcommand("selftest", "Run the quick invariant suite");
    selftest->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o_out, o_err;
        const int code = app.exit(e, o_out, o_err);
        out << o_out.str();
        err << o_err.str();
        return code == 0 ? kExitOk : kExitError;
    }

    if (selftest->parsed()) {
        set_thread_count(resolve_threads(o.threads));
        return run_selftest(out) ? kExitOk : kExitVerdictFail;
    }
    for (const auto& [sub, kind] : subs) {
        if (!sub->parsed()) continue;
        if (sub->count("--seed")) o.seed = seed;
        if (sub->count("--out")) o.out = out_dir;
        return run_config_command(kind, config_path, o, out, err);
    }
    return kExitError;
}

}  // namespace mvsde
