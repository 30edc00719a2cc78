#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvsde/ensemble.hpp"
#include "mvsde/metrics.hpp"
#include "mvsde/model.hpp"
#include "mvsde/scheme.hpp"
#include "mvsde/taming.hpp"

namespace mvsde {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kConfigVersion = 1;

enum class ExperimentKind { simulate, strong_rate, poc_rate, moment_stability, ergodic, probe };
std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& text);

/// Everything a run needs, with defaults filled in. See README for the file format.
struct RunConfig {
    ExperimentKind experiment = ExperimentKind::simulate;

    // [model]
    ModelSpec model;

    // [grid]
    double T = 1.0;
    std::size_t n = 64;
    std::vector<std::size_t> levels;
    std::size_t n_max = 1024;

    // [ensemble]
    std::size_t N = 64;
    std::vector<std::size_t> sizes;
    std::size_t N_ref = 1024;
    InitialLaw initial;
    InitialLaw initial_b;
    std::size_t probe_count = 0;  // 0: every particle

    // [scheme]
    TamingVariant taming = TamingVariant::finite;
    SchemeKind kind = SchemeKind::tamed_euler;
    InteractionMode interaction = InteractionMode::naive;
    double divergence_threshold = 1e10;

    // [metrics]
    W2Method method = W2Method::sorted_1d;
    std::size_t projections = 64;
    std::size_t assignment_cap = 512;
    double p = 2.0;

    // [run]
    std::uint64_t seed = 1;
    std::size_t reps = 32;
    std::string out = ".";
    std::string error_norm = "max_grid";  // or "terminal"
    double p0 = 4.0;
    std::size_t tableau_memory_cap = std::size_t{1} << 28;

    // [verdict]
    double slope_min = 0.40;
    double slope_max = 0.60;
    double r2_min = 0.95;
    double w2_ratio_max = 0.05;

    // [constants]
    std::map<std::string, double> constants;

    // [probe]
    std::string probe_set = "all";
    std::size_t probe_samples = 10000;
    double probe_radius = 5.0;
    std::uint64_t probe_seed = 1;
    double probe_p0 = 8.0;
    double probe_p1 = 3.0;

    // [ergodic]
    std::vector<double> stabilization_times = {1.0, 10.0};

    bool operator==(const RunConfig&) const = default;
};

/// Defaults of an experiment kind: model family, grid, sizes and verdict bands.
RunConfig default_config(ExperimentKind kind);

/// Raised by parse_config. `messages` lists every problem found.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> messages);
    const std::vector<std::string>& messages() const { return messages_; }

private:
    std::vector<std::string> messages_;
};

struct ParsedConfig {
    RunConfig config;
    std::vector<std::string> warnings;
};

/// Parses and validates a config document. Syntax errors carry a line number;
/// semantic violations are all collected before raising.
ParsedConfig parse_config(const std::string& text);

/// Cross-field validation on an already built config; returns violations.
std::vector<std::string> validate_config(const RunConfig& cfg, std::vector<std::string>* warnings = nullptr);

/// Canonical text form; parse_config(emit_config(c)).config == c.
std::string emit_config(const RunConfig& cfg);

/// Constants of the long-time analysis, computed from whichever assumption
/// constants are available.
struct ErgodicConstants {
    std::optional<double> rho1;
    std::optional<double> rho2;
    std::optional<double> h_star;
};
ErgodicConstants ergodic_constants(const std::map<std::string, double>& constants);

/// Error text when step size h violates h < min(h*, 1/(2 rho1)), if any.
std::optional<std::string> ergodic_step_violation(double h, const ErgodicConstants& c);

}  // namespace mvsde
