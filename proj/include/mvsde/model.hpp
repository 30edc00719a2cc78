#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mvsde/common.hpp"
#include "mvsde/measure.hpp"

namespace mvsde {

/// How the non-kernel coefficients see the measure: either as a functional of
/// the whole empirical law, or as the average of a two-point map b~(t,x,y).
enum class MeasureMode { functional, pairwise };

std::string to_string(MeasureMode mode);
MeasureMode measure_mode_from_string(const std::string& text);

/// Assumption families that the probe knows how to evaluate.
enum class AssumptionSet {
    one_sided_lipschitz,
    eu_b_sig,
    eu_f_g,
    anti_sys,
    b_poly,
    mon_rate,
    sch_gr_erg,
    diff_b_f_erg,
    er_sch_b_f,
    er_sch_x_b_f,
    er_sch_gr_b_f,
};

std::string to_string(AssumptionSet set);
AssumptionSet assumption_set_from_string(const std::string& text);
const std::vector<AssumptionSet>& all_assumption_sets();

/// Exponents that enter some assumption inequalities.
struct ProbeExponents {
    double p0 = 8.0;
    double p1 = 3.0;
};

/// Declarative description of a model, as read from a config file.
struct ModelSpec {
    std::string family = "cubic-mean-field";
    std::size_t d = 1;
    std::size_t l = 1;
    std::optional<double> q;
    std::map<std::string, double> params;

    bool operator==(const ModelSpec&) const = default;
};

/// Coefficients (b, sigma, f, g) of a McKean-Vlasov SDE with Vlasov kernels.
///
/// Vectors are spans of length d, diffusion matrices are row-major d x l.
/// Models are immutable after construction and safe to share across threads.
class CoefficientModel {
public:
    virtual ~CoefficientModel() = default;

    const std::string& family_id() const { return family_; }
    std::size_t d() const { return d_; }
    std::size_t l() const { return l_; }
    double q() const { return q_; }
    MeasureMode measure_mode() const { return mode_; }
    bool f_antisymmetric() const { return f_antisymmetric_; }
    const std::map<std::string, double>& params() const { return params_; }
    double param(const std::string& name) const;

    /// b(t, x, mu). In pairwise mode this is the mean of b~(t, x, y) over the
    /// atoms of mu, accumulated in ascending atom index.
    void drift(double t, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const;
    /// sigma(t, x, mu), a d x l matrix.
    void diffusion(double t, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const;
    void kernel_f(ConstVec x, ConstVec y, MutVec out) const;
    void kernel_g(ConstVec x, ConstVec y, MutVec out) const;

    /// Pairwise-mode two-point coefficients b~ and sigma~.
    void pair_drift(double t, ConstVec x, ConstVec y, MutVec out) const;
    void pair_diffusion(double t, ConstVec x, ConstVec y, MutVec out) const;

    virtual bool kernel_f_is_zero() const { return false; }
    virtual bool kernel_g_is_zero() const { return false; }

    /// C such that |f(x,y)| <= C (1 + |x-y|)^(q+1) for every x, y.
    virtual double kernel_growth_constant() const = 0;

    /// Analytically derived constants for each inequality of an assumption
    /// set (see probe.hpp for the ordering), or nullopt when the family makes
    /// no claim for that set at the current parameters.
    virtual std::optional<std::vector<std::vector<double>>> documented_constants(
        AssumptionSet set, const ProbeExponents& exponents) const;

protected:
    CoefficientModel(std::string family, std::size_t d, std::size_t l, double q, MeasureMode mode,
                     bool f_antisymmetric, std::map<std::string, double> params);

    virtual void functional_drift(double t, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const;
    virtual void functional_diffusion(double t, ConstVec x, const EmpiricalMeasure& mu,
                                      MutVec out) const;
    virtual void two_point_drift(double t, ConstVec x, ConstVec y, MutVec out) const;
    virtual void two_point_diffusion(double t, ConstVec x, ConstVec y, MutVec out) const;
    virtual void f_impl(ConstVec x, ConstVec y, MutVec out) const = 0;
    virtual void g_impl(ConstVec x, ConstVec y, MutVec out) const = 0;

    std::size_t noise_rank() const { return d_ < l_ ? d_ : l_; }
    /// Writes v (length d) onto the diagonal of a d x l matrix.
    void embed_diagonal(ConstVec v, MutVec out) const;
    void embed_constant_diagonal(double value, MutVec out) const;

private:
    std::string family_;
    std::size_t d_;
    std::size_t l_;
    double q_;
    MeasureMode mode_;
    bool f_antisymmetric_;
    std::map<std::string, double> params_;
};

using ModelPtr = std::shared_ptr<const CoefficientModel>;

/// Names of the compiled-in families.
std::vector<std::string> model_families();

/// Parameter names and defaults of a family, including its default q.
struct FamilyInfo {
    std::string id;
    double default_q;
    MeasureMode mode;
    std::map<std::string, double> defaults;
    std::string summary;
};
const FamilyInfo& family_info(const std::string& family);

/// Builds a model. Unknown families or parameters raise ContractViolation.
ModelPtr make_model(const ModelSpec& spec);

}  // namespace mvsde
