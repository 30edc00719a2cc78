#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mvsde/config.hpp"
#include "mvsde/metrics.hpp"
#include "mvsde/probe.hpp"

namespace mvsde {

using Json = nlohmann::ordered_json;

/// One row of `<name>_errors.csv`.
struct LevelError {
    double level = 0.0;
    double error = 0.0;
    double stderr_ = 0.0;
    std::size_t diverged = 0;
};

enum class Verdict { pass, fail, degenerate, exploratory };
std::string to_string(Verdict v);

/// Output of every driver: error table, optional fit, verdict and a JSON body
/// holding the details specific to the experiment.
struct RateReport {
    std::string name;        // file stem: strong_rate, poc_rate, ...
    std::string level_name;  // meaning of the level column
    std::vector<LevelError> rows;
    std::optional<RateFit> fit;
    Verdict verdict = Verdict::degenerate;
    std::vector<std::string> warnings;
    Json details = Json::object();
    /// Additional files written next to the report: (file name, contents).
    std::vector<std::pair<std::string, std::string>> extra_files;
};

/// Config echo embedded in every report: model, grid, seeds, version, sampler.
Json config_echo(const RunConfig& cfg);

RateReport run_strong_rate(const RunConfig& cfg);
RateReport run_poc_rate(const RunConfig& cfg);
RateReport run_moment_stability(const RunConfig& cfg);
RateReport run_ergodic_contraction(const RunConfig& cfg);
RateReport run_simulate(const RunConfig& cfg);
RateReport run_probe(const RunConfig& cfg);

/// Mean over the first min(N, probe_count) particles of |X^{i,N}_T - X^{i,N_ref}_T|^2
/// for repetition `rep`, with both systems sharing streams and initial values.
/// N may equal N_ref. Returns nullopt if either system diverged.
std::optional<double> poc_coupled_error(const RunConfig& cfg, std::size_t N, std::size_t rep);

/// Runs the driver named by cfg.experiment.
RateReport run_experiment(const RunConfig& cfg);

/// Writes `<out>/<name>_errors.csv` and `<out>/<name>_report.json`.
void write_report(const RateReport& report, const RunConfig& cfg, const std::string& out_dir);

Json report_json(const RateReport& report, const RunConfig& cfg);
std::string errors_csv(const RateReport& report);

}  // namespace mvsde
