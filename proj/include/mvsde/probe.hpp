#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvsde/model.hpp"

namespace mvsde {

/// Outcome of one inequality of an assumption set over all samples.
///
/// Every inequality is rewritten as lhs <= sum_c C_c * factor_c; the margin
/// of a sample is lhs minus the right side. `fitted_constant` is the value of
/// the inequality's first constant that makes every sample hold with the
/// other constants fixed (largest admissible value when its factor is
/// negative, smallest when positive).
struct InequalityRecord {
    std::string assumption_id;  // e.g. "eu_b_sig.2"
    std::vector<std::string> constant_names;
    std::vector<double> constants;
    std::size_t sample_count = 0;
    std::size_t fit_samples = 0;
    double worst_margin = 0.0;
    std::optional<double> fitted_constant;
    bool holds = true;
};

struct AssumptionReport {
    AssumptionSet set;
    std::size_t sample_count = 0;
    double radius = 0.0;
    std::uint64_t seed = 0;
    ProbeExponents exponents;
    std::vector<InequalityRecord> inequalities;

    bool holds() const;
};

struct ProbeSpec {
    std::size_t count = 10000;
    double radius = 5.0;
    std::uint64_t seed = 1;
    ProbeExponents exponents;
    /// Overrides for the documented constants, keyed by constant name.
    std::map<std::string, double> constants;
};

/// Constant names of each inequality of a set, in evaluation order.
const std::vector<std::vector<std::string>>& assumption_constant_names(AssumptionSet set);

/// Samples x, x', y, y' uniformly in the ball of the given radius, 2-atom
/// measures mu, mu' with atoms in the same ball and t, t' in [0, radius], and
/// evaluates every inequality of the set. Margins within 1e-10 of the scale
/// of the terms involved count as 0.
AssumptionReport probe_assumptions(const CoefficientModel& model, AssumptionSet set,
                                   const ProbeSpec& spec);

/// W2 between two uniform 2-atom measures {a1, a2} and {b1, b2}, squared.
double two_atom_w2_squared(ConstVec a1, ConstVec a2, ConstVec b1, ConstVec b2);

}  // namespace mvsde
