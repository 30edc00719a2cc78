#include "mvsde/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace mvsde {

namespace pt = boost::property_tree;

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::simulate: return "simulate";
        case ExperimentKind::strong_rate: return "strong-rate";
        case ExperimentKind::poc_rate: return "poc-rate";
        case ExperimentKind::moment_stability: return "moment-stability";
        case ExperimentKind::ergodic: return "ergodic";
        case ExperimentKind::probe: return "probe-assumptions";
    }
    return "simulate";
}

ExperimentKind experiment_kind_from_string(const std::string& text) {
    for (auto kind : {ExperimentKind::simulate, ExperimentKind::strong_rate, ExperimentKind::poc_rate,
                      ExperimentKind::moment_stability, ExperimentKind::ergodic, ExperimentKind::probe})
        if (to_string(kind) == text) return kind;
    throw ContractViolation("unknown experiment '" + text + "'");
}

ConfigError::ConfigError(std::vector<std::string> messages)
    : std::runtime_error(messages.empty() ? "invalid config" : messages.front()),
      messages_(std::move(messages)) {}

RunConfig default_config(ExperimentKind kind) {
    RunConfig c;
    c.experiment = kind;
    switch (kind) {
        case ExperimentKind::simulate:
        case ExperimentKind::probe:
            break;
        case ExperimentKind::strong_rate:
            c.levels = {16, 32, 64, 128, 256, 512};
            c.n_max = 1024;
            c.N = 64;
            c.reps = 32;
            c.initial = {InitialLaw::Kind::gaussian, 0.0, 0.5};
            c.p0 = 14.0;
            break;
        case ExperimentKind::poc_rate:
            c.model.family = "pairwise-vlasov";
            c.n = 32;
            c.sizes = {16, 32, 64, 128, 256};
            c.N_ref = 1024;
            c.reps = 16;
            c.slope_min = -0.65;
            c.slope_max = -0.35;
            c.r2_min = 0.0;
            break;
        case ExperimentKind::moment_stability:
            c.n = 2;
            c.T = 100.0;
            c.N = 64;
            c.p0 = 4.0;
            break;
        case ExperimentKind::ergodic:
            c.model.family = "ergodic-dissipative";
            c.taming = TamingVariant::ergodic;
            c.n = 100;
            c.T = 20.0;
            c.N = 256;
            c.initial = {InitialLaw::Kind::gaussian, 0.0, 1.0};
            c.initial_b = {InitialLaw::Kind::gaussian, 5.0, 1.0};
            c.r2_min = 0.9;
            break;
    }
    return c;
}

namespace {

std::string fmt_num(double v) { return fmt::format("{}", v); }

template <class T>
std::string fmt_list(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += fmt_num(values[i]);
        else
            out += std::to_string(values[i]);
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

const std::set<std::string> kConstantNames = {"L",      "hatL_bs1", "hatL_bs2", "hatL_fg1", "L_b1",  "L_b2",
                                              "L_f1",   "L_bs1",    "L_bs2",    "L_bs3",    "L_bs4", "L_bs5",
                                              "L_fg1",  "L_fg2",    "L_fg3",    "L_b3",     "L_b4",  "L_f2"};

const std::vector<std::string> kSections = {"model", "grid",    "ensemble", "scheme", "metrics",
                                            "run",   "verdict", "constants", "probe", "ergodic"};

bool is_section(const std::string& key) {
    return std::find(kSections.begin(), kSections.end(), key) != kSections.end();
}

class Reader {
public:
    Reader(const pt::ptree& root, std::vector<std::string>& errors) : root_(root), errors_(errors) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) {
        const pt::ptree* node = section.empty() ? &root_ : find_section(section);
        if (!node) return std::nullopt;
        auto it = node->find(key);
        if (it == node->not_found()) return std::nullopt;
        consumed_.insert(section + "." + key);
        return trim(it->second.data());
    }

    void text(const std::string& section, const std::string& key, std::string& target) {
        if (auto v = raw(section, key)) target = *v;
    }

    void real(const std::string& section, const std::string& key, double& target) {
        if (auto v = raw(section, key)) {
            if (auto parsed = parse_double(*v)) target = *parsed;
            else bad(section, key, *v, "a real number");
        }
    }

    template <class Int>
    void integer(const std::string& section, const std::string& key, Int& target) {
        if (auto v = raw(section, key)) {
            if (auto parsed = parse_uint(*v)) target = static_cast<Int>(*parsed);
            else bad(section, key, *v, "a nonnegative integer");
        }
    }

    void size_list(const std::string& section, const std::string& key, std::vector<std::size_t>& target) {
        if (auto v = raw(section, key)) {
            std::vector<std::size_t> out;
            for (const auto& item : split(*v)) {
                if (auto parsed = parse_uint(item)) out.push_back(static_cast<std::size_t>(*parsed));
                else return bad(section, key, *v, "a comma-separated list of integers");
            }
            target = out;
        }
    }

    void real_list(const std::string& section, const std::string& key, std::vector<double>& target) {
        if (auto v = raw(section, key)) {
            std::vector<double> out;
            for (const auto& item : split(*v)) {
                if (auto parsed = parse_double(item)) out.push_back(*parsed);
                else return bad(section, key, *v, "a comma-separated list of reals");
            }
            target = out;
        }
    }

    template <class Enum, class Fn>
    void choice(const std::string& section, const std::string& key, Enum& target, Fn from_string) {
        if (auto v = raw(section, key)) {
            try {
                target = from_string(*v);
            } catch (const ContractViolation& e) {
                errors_.push_back("[" + section + "] " + key + ": " + e.what());
            }
        }
    }

    /// Unread keys of a section, in document order.
    std::vector<std::string> unread(const std::string& section) const {
        std::vector<std::string> out;
        const pt::ptree* node = section.empty() ? &root_ : find_section(section);
        if (!node) return out;
        for (const auto& [key, child] : *node) {
            if (section.empty() && (!child.empty() || is_section(key))) continue;
            if (!consumed_.contains(section + "." + key)) out.push_back(key);
        }
        return out;
    }

    static std::optional<double> parse_double(const std::string& s) {
        double v = 0.0;
        const char* end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, v);
        if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
        return v;
    }

    static std::optional<unsigned long long> parse_uint(const std::string& s) {
        unsigned long long v = 0;
        const char* end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, v);
        if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
        return v;
    }

private:
    const pt::ptree* find_section(const std::string& section) const {
        auto it = root_.find(section);
        if (it == root_.not_found() || it->second.empty()) return nullptr;
        return &it->second;
    }

    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(trim(item));
        return out;
    }

    void bad(const std::string& section, const std::string& key, const std::string& value,
             const std::string& expected) {
        errors_.push_back("[" + section + "] " + key + " = '" + value + "' is not " + expected);
    }

    const pt::ptree& root_;
    std::vector<std::string>& errors_;
    std::set<std::string> consumed_;
};

void read_law(Reader& r, const std::string& prefix, InitialLaw& law) {
    r.choice("ensemble", prefix, law.kind, initial_law_kind_from_string);
    r.real("ensemble", prefix + "_mean", law.mean);
    r.real("ensemble", prefix + "_spread", law.spread);
}

bool divides_exactly(double horizon, std::size_t n) {
    const double exact = horizon * static_cast<double>(n);
    return std::abs(exact - std::round(exact)) <= 1e-9 * std::max(1.0, exact) && std::round(exact) >= 1.0;
}

}  // namespace

ErgodicConstants ergodic_constants(const std::map<std::string, double>& c) {
    auto has = [&](std::initializer_list<const char*> keys) {
        return std::all_of(keys.begin(), keys.end(), [&](const char* k) { return c.contains(k); });
    };
    auto at = [&](const char* k) { return c.at(k); };
    ErgodicConstants out;
    if (has({"hatL_bs1", "hatL_bs2", "L_fg1", "L_b1", "L_b2", "L_f1"}))
        out.rho1 = at("hatL_bs1") - at("hatL_bs2") - 4.0 * at("L_fg1") - at("L_b1") - at("L_b2") -
                   4.0 * at("L_f1");
    if (has({"L_bs1", "L_bs2", "L_bs4", "L_bs5", "L_fg1", "L_fg3", "L_b1", "L_b2", "L_b3", "L_b4", "L_f1",
             "L_f2"}))
        out.rho2 = std::min(at("L_bs1") / 2.0, at("L_bs4")) - (at("L_bs2") + at("L_bs5")) +
                   2.0 * std::min(at("L_fg1") / 2.0, at("L_fg3")) - 4.0 * std::max(at("L_b1"), at("L_b3")) -
                   2.0 * std::max(at("L_b2"), at("L_b4")) - 16.0 * std::max(at("L_f1"), at("L_f2"));
    if (has({"L_bs1", "L_bs3", "L_fg1", "L_fg2"})) {
        const double a = at("L_bs1") / (2.0 * at("L_bs3"));
        const double b = at("L_fg1") / (2.0 * at("L_fg2"));
        out.h_star = std::min(a * a, b * b);
    }
    return out;
}

std::optional<std::string> ergodic_step_violation(double h, const ErgodicConstants& c) {
    if (c.rho1 && *c.rho1 <= 0.0)
        return fmt::format("rho1 = {} is not positive, so no step size h < 1/(2 rho1) exists", *c.rho1);
    if (c.rho1 && h >= 1.0 / (2.0 * *c.rho1))
        return fmt::format("h = {} violates h < 1/(2 rho1) = {} (rho1 = {})", h, 1.0 / (2.0 * *c.rho1), *c.rho1);
    if (c.h_star && h >= *c.h_star) return fmt::format("h = {} violates h < h* = {}", h, *c.h_star);
    return std::nullopt;
}

std::vector<std::string> validate_config(const RunConfig& c, std::vector<std::string>* warnings) {
    std::vector<std::string> errors;
    auto warn = [&](const std::string& w) {
        if (warnings) warnings->push_back(w);
    };

    // Model.
    std::optional<FamilyInfo> info;
    try {
        info = family_info(c.model.family);
        make_model(c.model);
    } catch (const ContractViolation& e) {
        errors.push_back(std::string("[model] ") + e.what());
    }
    const double q = c.model.q.value_or(info ? info->default_q : 0.0);

    // Grid.
    if (!(c.T > 0.0) || !std::isfinite(c.T)) errors.push_back("[grid] T must be positive");
    if (c.n < 1) errors.push_back("[grid] n must be >= 1");
    const bool uses_n = c.experiment != ExperimentKind::strong_rate && c.experiment != ExperimentKind::probe;
    if (uses_n && c.n >= 1 && c.T > 0.0 && !divides_exactly(c.T, c.n))
        errors.push_back(fmt::format("[grid] T = {} is not a multiple of h = 1/{}", c.T, c.n));

    // Ensemble and scheme.
    if (c.N < 1) errors.push_back("[ensemble] N must be >= 1");
    if (c.initial.spread < 0.0 || c.initial_b.spread < 0.0)
        errors.push_back("[ensemble] initial spreads must be >= 0");
    if (!(c.divergence_threshold > 0.0)) errors.push_back("[scheme] divergence_threshold must be positive");
    if (c.reps < 1) errors.push_back("[run] reps must be >= 1");
    if (!(c.p >= 1.0)) errors.push_back("[metrics] p must be >= 1");
    if (c.error_norm != "max_grid" && c.error_norm != "terminal")
        errors.push_back("[run] error_norm must be max_grid or terminal, got '" + c.error_norm + "'");
    for (const auto& [name, value] : c.constants)
        if (!kConstantNames.contains(name)) errors.push_back("[constants] unknown constant '" + name + "'");

    switch (c.experiment) {
        case ExperimentKind::strong_rate: {
            if (c.levels.size() < 2) errors.push_back("[grid] levels needs at least two entries");
            if (c.n_max < 1) errors.push_back("[grid] n_max must be >= 1");
            for (std::size_t i = 0; i < c.levels.size(); ++i) {
                const std::size_t lv = c.levels[i];
                if (lv == 0) {
                    errors.push_back("[grid] levels must be positive");
                    continue;
                }
                if (c.n_max >= 1 && c.n_max % lv != 0)
                    errors.push_back(fmt::format("[grid] level {} does not divide n_max {}", lv, c.n_max));
                if (lv >= c.n_max)
                    errors.push_back(fmt::format("[grid] level {} is not below n_max {}", lv, c.n_max));
                if (i > 0 && lv != 2 * c.levels[i - 1])
                    errors.push_back(fmt::format("[grid] levels {} and {} do not form a dyadic chain",
                                                 c.levels[i - 1], lv));
                if (c.T > 0.0 && !divides_exactly(c.T, lv))
                    errors.push_back(fmt::format("[grid] T = {} is not a multiple of h = 1/{}", c.T, lv));
            }
            if (c.n_max >= 1 && c.T > 0.0 && !divides_exactly(c.T, c.n_max))
                errors.push_back(fmt::format("[grid] T = {} is not a multiple of 1/n_max = 1/{}", c.T, c.n_max));
            const double bound = c.p0 / (3.0 * q + 1.0);
            if (c.p > bound)
                warn(fmt::format("p = {} exceeds p0/(3q+1) = {} for p0 = {}, q = {}", c.p, bound, c.p0, q));
            break;
        }
        case ExperimentKind::poc_rate: {
            if (c.sizes.size() < 2) errors.push_back("[ensemble] sizes needs at least two entries");
            for (std::size_t s : c.sizes) {
                if (s == 0) errors.push_back("[ensemble] sizes must be positive");
                if (s >= c.N_ref)
                    errors.push_back(fmt::format("[ensemble] N_ref = {} is not larger than size {}", c.N_ref, s));
            }
            const double bound = 2.0 * c.p0 / (q + 1.0);
            if (c.p > bound)
                warn(fmt::format("p = {} exceeds 2 p0/(q+1) = {} for p0 = {}, q = {}", c.p, bound, c.p0, q));
            if (info && info->mode == MeasureMode::functional)
                warn("functional measure dependence: the dimension-free rate does not apply, "
                     "the run is exploratory and carries no verdict");
            break;
        }
        case ExperimentKind::moment_stability:
            if (!(c.p0 >= 1.0)) errors.push_back("[run] p0 must be >= 1");
            break;
        case ExperimentKind::ergodic: {
            if (c.taming != TamingVariant::ergodic)
                errors.push_back("[scheme] the ergodic experiment needs taming = ergodic, got " +
                                 to_string(c.taming));
            if (c.method == W2Method::sorted_1d && c.model.d != 1)
                errors.push_back("[metrics] method sorted_1d needs d = 1");
            if (c.method == W2Method::exact_assignment && c.N > c.assignment_cap)
                errors.push_back(fmt::format("[metrics] N = {} exceeds assignment_cap = {}", c.N, c.assignment_cap));
            if (c.n >= 1)
                if (auto v = ergodic_step_violation(1.0 / static_cast<double>(c.n), ergodic_constants(c.constants)))
                    errors.push_back("[grid] " + *v);
            for (double s : c.stabilization_times)
                if (!(s > 0.0) || 2.0 * s > c.T + 1e-12 || (c.n >= 1 && !divides_exactly(s, c.n)))
                    errors.push_back(fmt::format(
                        "[ergodic] stabilization time {} must be a positive grid time with 2s <= T", s));
            break;
        }
        case ExperimentKind::probe:
            if (c.probe_set != "all") {
                try {
                    assumption_set_from_string(c.probe_set);
                } catch (const ContractViolation& e) {
                    errors.push_back(std::string("[probe] ") + e.what());
                }
            }
            if (c.probe_samples < 1) errors.push_back("[probe] count must be >= 1");
            if (!(c.probe_radius > 0.0)) errors.push_back("[probe] radius must be positive");
            break;
        case ExperimentKind::simulate:
            break;
    }
    return errors;
}

ParsedConfig parse_config(const std::string& text) {
    pt::ptree root;
    try {
        std::istringstream in(text);
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({fmt::format("syntax error at line {}: {}", e.line(), e.message())});
    }

    std::vector<std::string> errors;
    Reader r(root, errors);

    const auto version = r.raw("", "config_version");
    if (!version) errors.push_back("config_version is missing (expected 1)");
    else if (*version != std::to_string(kConfigVersion))
        errors.push_back("config_version = " + *version + " is not supported (expected 1)");

    const auto experiment = r.raw("", "experiment");
    ExperimentKind kind = ExperimentKind::simulate;
    if (!experiment) {
        errors.push_back("experiment is missing");
    } else {
        try {
            kind = experiment_kind_from_string(*experiment);
        } catch (const ContractViolation& e) {
            errors.push_back(e.what());
        }
    }

    RunConfig c = default_config(kind);

    for (const auto& [key, child] : root) {
        if (child.empty()) continue;
        if (!is_section(key))
            errors.push_back("unknown section [" + key + "]");
    }

    // [model]
    r.text("model", "family", c.model.family);
    r.integer("model", "d", c.model.d);
    bool l_given = r.raw("model", "l").has_value();
    c.model.l = c.model.d;
    if (l_given) r.integer("model", "l", c.model.l);
    if (auto q = r.raw("model", "q")) {
        if (auto v = Reader::parse_double(*q)) c.model.q = *v;
        else errors.push_back("[model] q = '" + *q + "' is not a real number");
    }
    if (auto mode = r.raw("model", "measure_mode")) {
        try {
            const MeasureMode m = measure_mode_from_string(*mode);
            if (m != family_info(c.model.family).mode)
                errors.push_back("[model] measure_mode = " + *mode + " does not match family " +
                                 c.model.family + " (" + to_string(family_info(c.model.family).mode) + ")");
        } catch (const ContractViolation& e) {
            errors.push_back(std::string("[model] ") + e.what());
        }
    }
    for (const auto& key : r.unread("model")) {
        double value = 0.0;
        r.real("model", key, value);
        c.model.params[key] = value;
    }

    // [grid]
    r.real("grid", "T", c.T);
    r.integer("grid", "n", c.n);
    r.size_list("grid", "levels", c.levels);
    r.integer("grid", "n_max", c.n_max);

    // [ensemble]
    r.integer("ensemble", "N", c.N);
    r.size_list("ensemble", "sizes", c.sizes);
    r.integer("ensemble", "N_ref", c.N_ref);
    read_law(r, "initial", c.initial);
    read_law(r, "initial_b", c.initial_b);
    r.integer("ensemble", "probe_count", c.probe_count);

    // [scheme]
    r.choice("scheme", "taming", c.taming, taming_variant_from_string);
    r.choice("scheme", "kind", c.kind, scheme_kind_from_string);
    r.choice("scheme", "interaction", c.interaction, interaction_mode_from_string);
    r.real("scheme", "divergence_threshold", c.divergence_threshold);

    // [metrics]
    r.choice("metrics", "method", c.method, w2_method_from_string);
    r.integer("metrics", "projections", c.projections);
    r.integer("metrics", "assignment_cap", c.assignment_cap);
    r.real("metrics", "p", c.p);

    // [run]
    r.integer("run", "seed", c.seed);
    r.integer("run", "reps", c.reps);
    r.text("run", "out", c.out);
    r.text("run", "error_norm", c.error_norm);
    r.real("run", "p0", c.p0);
    r.integer("run", "tableau_memory_cap", c.tableau_memory_cap);

    // [verdict]
    r.real("verdict", "slope_min", c.slope_min);
    r.real("verdict", "slope_max", c.slope_max);
    r.real("verdict", "r2_min", c.r2_min);
    r.real("verdict", "w2_ratio_max", c.w2_ratio_max);

    // [constants]
    for (const auto& key : r.unread("constants")) {
        double value = 0.0;
        r.real("constants", key, value);
        c.constants[key] = value;
    }

    // [probe]
    r.text("probe", "set", c.probe_set);
    r.integer("probe", "count", c.probe_samples);
    r.real("probe", "radius", c.probe_radius);
    r.integer("probe", "seed", c.probe_seed);
    r.real("probe", "p0", c.probe_p0);
    r.real("probe", "p1", c.probe_p1);

    // [ergodic]
    r.real_list("ergodic", "stabilization_times", c.stabilization_times);

    for (const auto& section : kSections)
        for (const auto& key : r.unread(section)) errors.push_back("[" + section + "] unknown key '" + key + "'");
    for (const auto& key : r.unread("")) errors.push_back("unknown top-level key '" + key + "'");

    ParsedConfig parsed{c, {}};
    if (errors.empty() || experiment) {
        auto semantic = validate_config(c, &parsed.warnings);
        // Avoid repeating problems already reported while reading.
        for (auto& e : semantic)
            if (std::find(errors.begin(), errors.end(), e) == errors.end()) errors.push_back(std::move(e));
    }
    if (!errors.empty()) throw ConfigError(errors);
    return parsed;
}

std::string emit_config(const RunConfig& c) {
    std::string s;
    auto line = [&](const std::string& key, const std::string& value) { s += key + " = " + value + "\n"; };
    line("config_version", std::to_string(kConfigVersion));
    line("experiment", to_string(c.experiment));

    s += "\n[model]\n";
    line("family", c.model.family);
    line("d", std::to_string(c.model.d));
    line("l", std::to_string(c.model.l));
    if (c.model.q) line("q", fmt_num(*c.model.q));
    for (const auto& [k, v] : c.model.params) line(k, fmt_num(v));

    s += "\n[grid]\n";
    line("T", fmt_num(c.T));
    line("n", std::to_string(c.n));
    line("levels", fmt_list(c.levels));
    line("n_max", std::to_string(c.n_max));

    s += "\n[ensemble]\n";
    line("N", std::to_string(c.N));
    line("sizes", fmt_list(c.sizes));
    line("N_ref", std::to_string(c.N_ref));
    line("initial", to_string(c.initial.kind));
    line("initial_mean", fmt_num(c.initial.mean));
    line("initial_spread", fmt_num(c.initial.spread));
    line("initial_b", to_string(c.initial_b.kind));
    line("initial_b_mean", fmt_num(c.initial_b.mean));
    line("initial_b_spread", fmt_num(c.initial_b.spread));
    line("probe_count", std::to_string(c.probe_count));

    s += "\n[scheme]\n";
    line("taming", to_string(c.taming));
    line("kind", to_string(c.kind));
    line("interaction", to_string(c.interaction));
    line("divergence_threshold", fmt_num(c.divergence_threshold));

    s += "\n[metrics]\n";
    line("method", to_string(c.method));
    line("projections", std::to_string(c.projections));
    line("assignment_cap", std::to_string(c.assignment_cap));
    line("p", fmt_num(c.p));

    s += "\n[run]\n";
    line("seed", std::to_string(c.seed));
    line("reps", std::to_string(c.reps));
    line("out", c.out);
    line("error_norm", c.error_norm);
    line("p0", fmt_num(c.p0));
    line("tableau_memory_cap", std::to_string(c.tableau_memory_cap));

    s += "\n[verdict]\n";
    line("slope_min", fmt_num(c.slope_min));
    line("slope_max", fmt_num(c.slope_max));
    line("r2_min", fmt_num(c.r2_min));
    line("w2_ratio_max", fmt_num(c.w2_ratio_max));

    if (!c.constants.empty()) {
        s += "\n[constants]\n";
        for (const auto& [k, v] : c.constants) line(k, fmt_num(v));
    }

    s += "\n[probe]\n";
    line("set", c.probe_set);
    line("count", std::to_string(c.probe_samples));
    line("radius", fmt_num(c.probe_radius));
    line("seed", std::to_string(c.probe_seed));
    line("p0", fmt_num(c.probe_p0));
    line("p1", fmt_num(c.probe_p1));

    s += "\n[ergodic]\n";
    line("stabilization_times", fmt_list(c.stabilization_times));
    return s;
}

}  // namespace mvsde
