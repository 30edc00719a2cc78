#include "mvsde/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace mvsde {

namespace {

using Constants = std::vector<std::vector<double>>;

// Writes -scale * u * (1 + |u|^q) (or -scale * u * |u|^q when linear_part is
// false) for u = x - y. The differences are formed componentwise, so swapping
// x and y flips the sign bit and nothing else.
void radial_kernel(ConstVec x, ConstVec y, double scale, double q, bool linear_part, MutVec out) {
    std::array<double, kMaxDim> u{};
    double sq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        u[k] = x[k] - y[k];
        sq += u[k] * u[k];
    }
    const double radial = norm_power_from_squared(sq, q);
    const double factor = scale * (linear_part ? 1.0 + radial : radial);
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = -factor * u[k];
}

}  // namespace

std::string to_string(MeasureMode mode) {
    return mode == MeasureMode::functional ? "functional" : "pairwise";
}

MeasureMode measure_mode_from_string(const std::string& text) {
    if (text == "functional") return MeasureMode::functional;
    if (text == "pairwise") return MeasureMode::pairwise;
    throw ContractViolation("unknown measure_mode '" + text + "'");
}

namespace {
const std::vector<std::pair<AssumptionSet, std::string>>& set_names() {
    static const std::vector<std::pair<AssumptionSet, std::string>> names = {
        {AssumptionSet::one_sided_lipschitz, "one_sided_lipschitz"},
        {AssumptionSet::eu_b_sig, "eu_b_sig"},
        {AssumptionSet::eu_f_g, "eu_f_g"},
        {AssumptionSet::anti_sys, "anti_sys"},
        {AssumptionSet::b_poly, "b_poly"},
        {AssumptionSet::mon_rate, "mon_rate"},
        {AssumptionSet::sch_gr_erg, "sch_gr_erg"},
        {AssumptionSet::diff_b_f_erg, "diff_b_f_erg"},
        {AssumptionSet::er_sch_b_f, "er_sch_b_f"},
        {AssumptionSet::er_sch_x_b_f, "er_sch_x_b_f"},
        {AssumptionSet::er_sch_gr_b_f, "er_sch_gr_b_f"},
    };
    return names;
}
}  // namespace

std::string to_string(AssumptionSet set) {
    for (const auto& [value, name] : set_names())
        if (value == set) return name;
    return "unknown";
}

AssumptionSet assumption_set_from_string(const std::string& text) {
    for (const auto& [value, name] : set_names())
        if (name == text) return value;
    throw ContractViolation("unknown assumption set '" + text + "'");
}

const std::vector<AssumptionSet>& all_assumption_sets() {
    static const std::vector<AssumptionSet> sets = [] {
        std::vector<AssumptionSet> out;
        for (const auto& entry : set_names()) out.push_back(entry.first);
        return out;
    }();
    return sets;
}

CoefficientModel::CoefficientModel(std::string family, std::size_t d, std::size_t l, double q,
                                   MeasureMode mode, bool f_antisymmetric,
                                   std::map<std::string, double> params)
    : family_(std::move(family)),
      d_(d),
      l_(l),
      q_(q),
      mode_(mode),
      f_antisymmetric_(f_antisymmetric),
      params_(std::move(params)) {
    require(d_ >= 1 && d_ <= kMaxDim, "model: d must lie in [1, " + std::to_string(kMaxDim) + "]");
    require(l_ >= 1 && l_ <= kMaxDim, "model: l must lie in [1, " + std::to_string(kMaxDim) + "]");
    require(q_ >= 0.0 && std::isfinite(q_), "model: q must be a finite value >= 0");
}

double CoefficientModel::param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw ContractViolation("model " + family_ + " has no parameter " + name);
    return it->second;
}

void CoefficientModel::drift(double t, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const {
    require(x.size() == d_ && out.size() == d_, "drift: dimension mismatch");
    require(mu.dim() == d_, "drift: measure dimension mismatch");
    if (mode_ == MeasureMode::functional) {
        functional_drift(t, x, mu, out);
        return;
    }
    require(!mu.empty(), "drift: pairwise mode needs a nonempty measure");
    std::array<double, kMaxDim> term{};
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < mu.size(); ++j) {
        two_point_drift(t, x, mu.atom(j), MutVec(term.data(), d_));
        for (std::size_t k = 0; k < d_; ++k) out[k] += term[k];
    }
    const double count = static_cast<double>(mu.size());
    for (std::size_t k = 0; k < d_; ++k) out[k] /= count;
}

void CoefficientModel::diffusion(double t, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const {
    require(x.size() == d_ && out.size() == d_ * l_, "diffusion: dimension mismatch");
    require(mu.dim() == d_, "diffusion: measure dimension mismatch");
    if (mode_ == MeasureMode::functional) {
        functional_diffusion(t, x, mu, out);
        return;
    }
    require(!mu.empty(), "diffusion: pairwise mode needs a nonempty measure");
    std::array<double, kMaxDim * kMaxDim> term{};
    const std::size_t size = d_ * l_;
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < mu.size(); ++j) {
        two_point_diffusion(t, x, mu.atom(j), MutVec(term.data(), size));
        for (std::size_t k = 0; k < size; ++k) out[k] += term[k];
    }
    const double count = static_cast<double>(mu.size());
    for (std::size_t k = 0; k < size; ++k) out[k] /= count;
}

void CoefficientModel::kernel_f(ConstVec x, ConstVec y, MutVec out) const {
    require(x.size() == d_ && y.size() == d_ && out.size() == d_, "kernel_f: dimension mismatch");
    f_impl(x, y, out);
}

void CoefficientModel::kernel_g(ConstVec x, ConstVec y, MutVec out) const {
    require(x.size() == d_ && y.size() == d_ && out.size() == d_ * l_, "kernel_g: dimension mismatch");
    g_impl(x, y, out);
}

void CoefficientModel::pair_drift(double t, ConstVec x, ConstVec y, MutVec out) const {
    require(mode_ == MeasureMode::pairwise, "pair_drift: model is not in pairwise mode");
    require(x.size() == d_ && y.size() == d_ && out.size() == d_, "pair_drift: dimension mismatch");
    two_point_drift(t, x, y, out);
}

void CoefficientModel::pair_diffusion(double t, ConstVec x, ConstVec y, MutVec out) const {
    require(mode_ == MeasureMode::pairwise, "pair_diffusion: model is not in pairwise mode");
    require(x.size() == d_ && y.size() == d_ && out.size() == d_ * l_,
            "pair_diffusion: dimension mismatch");
    two_point_diffusion(t, x, y, out);
}

std::optional<Constants> CoefficientModel::documented_constants(AssumptionSet,
                                                                const ProbeExponents&) const {
    return std::nullopt;
}

void CoefficientModel::functional_drift(double, ConstVec, const EmpiricalMeasure&, MutVec) const {
    throw std::logic_error(family_ + ": functional drift not implemented");
}
void CoefficientModel::functional_diffusion(double, ConstVec, const EmpiricalMeasure&, MutVec) const {
    throw std::logic_error(family_ + ": functional diffusion not implemented");
}
void CoefficientModel::two_point_drift(double, ConstVec, ConstVec, MutVec) const {
    throw std::logic_error(family_ + ": two-point drift not implemented");
}
void CoefficientModel::two_point_diffusion(double, ConstVec, ConstVec, MutVec) const {
    throw std::logic_error(family_ + ": two-point diffusion not implemented");
}

void CoefficientModel::embed_diagonal(ConstVec v, MutVec out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t a = 0; a < noise_rank(); ++a) out[a * l_ + a] = v[a];
}

void CoefficientModel::embed_constant_diagonal(double value, MutVec out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t a = 0; a < noise_rank(); ++a) out[a * l_ + a] = value;
}

// ---------------------------------------------------------------------------
// Built-in families. Vector-valued noise shapes such as c (x - y) are placed
// on the diagonal of the d x l matrix, so |g| = c |x - y| whenever l >= d.
// ---------------------------------------------------------------------------

namespace {

/// b = -a x|x|^2 + lambda mean(mu), sigma = nu I, f = -kappa (x-y)|x-y|^2,
/// g = c_g (x - y). q = 2.
class CubicMeanField : public CoefficientModel {
public:
    CubicMeanField(const std::string& id, std::size_t d, std::size_t l, double q,
                   std::map<std::string, double> p, double drift_sign)
        : CoefficientModel(id, d, l, q, MeasureMode::functional, true, std::move(p)),
          a_(param("cubic")),
          lambda_(param("lambda")),
          nu_(param("nu")),
          kappa_(param("kappa")),
          cg_(param("c_g")),
          sign_(drift_sign) {
        require(a_ >= 0.0 && kappa_ >= 0.0, id + ": cubic and kappa must be >= 0");
    }

    bool kernel_f_is_zero() const override { return kappa_ == 0.0; }
    bool kernel_g_is_zero() const override { return cg_ == 0.0; }
    double kernel_growth_constant() const override { return kappa_; }

    std::optional<Constants> documented_constants(AssumptionSet set,
                                                  const ProbeExponents& e) const override {
        // Derivations assume a >= 0 (monotone cubic) and q >= 2. The unstable
        // twin reuses them on purpose: its probe must fail.
        if (q() < 2.0) return std::nullopt;
        const double r = static_cast<double>(noise_rank());
        const double half_lambda = 0.5 * std::abs(lambda_);
        switch (set) {
            case AssumptionSet::one_sided_lipschitz:
                return Constants{{0.0}};
            case AssumptionSet::eu_b_sig:
                return Constants{{std::max(half_lambda, (e.p0 - 1.0) * nu_ * nu_ * r)}, {half_lambda}};
            case AssumptionSet::eu_f_g:
                return Constants{{(e.p0 - 1.0) * cg_ * cg_}, {kappa_}};
            case AssumptionSet::anti_sys:
                return Constants{{}, {0.0}, {2.0 * (e.p0 - 1.0) * cg_ * cg_}};
            case AssumptionSet::b_poly:
                return Constants{{std::max(a_, std::abs(lambda_))}};
            case AssumptionSet::mon_rate:
                return Constants{{half_lambda}, {2.0 * (e.p1 - 1.0) * cg_ * cg_}, {0.0}};
            default:
                return std::nullopt;
        }
    }

protected:
    void functional_drift(double, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const override {
        const double sq = squared_norm(x);
        const ConstVec m = mu.mean();
        for (std::size_t k = 0; k < d(); ++k) out[k] = -sign_ * a_ * x[k] * sq + lambda_ * m[k];
    }
    void functional_diffusion(double, ConstVec, const EmpiricalMeasure&, MutVec out) const override {
        embed_constant_diagonal(nu_, out);
    }
    void f_impl(ConstVec x, ConstVec y, MutVec out) const override {
        radial_kernel(x, y, kappa_, 2.0, false, out);
    }
    void g_impl(ConstVec x, ConstVec y, MutVec out) const override {
        std::array<double, kMaxDim> u{};
        for (std::size_t k = 0; k < d(); ++k) u[k] = cg_ * (x[k] - y[k]);
        embed_diagonal(ConstVec(u.data(), d()), out);
    }

private:
    double a_, lambda_, nu_, kappa_, cg_, sign_;
};

/// b = -x - x|x|^q, sigma = eps diag(x), f = -kappa (x-y)(1 + |x-y|^q),
/// g = c_g (x - y). Satisfies the long-time dissipativity conditions.
class ErgodicDissipative : public CoefficientModel {
public:
    ErgodicDissipative(std::size_t d, std::size_t l, double q, std::map<std::string, double> p)
        : CoefficientModel("ergodic-dissipative", d, l, q, MeasureMode::functional, true, std::move(p)),
          eps_(param("eps")),
          kappa_(param("kappa")),
          cg_(param("c_g")) {
        require(kappa_ >= 0.0, "ergodic-dissipative: kappa must be >= 0");
    }

    bool kernel_f_is_zero() const override { return kappa_ == 0.0; }
    bool kernel_g_is_zero() const override { return cg_ == 0.0; }
    double kernel_growth_constant() const override { return kappa_; }

    std::optional<Constants> documented_constants(AssumptionSet set,
                                                  const ProbeExponents& e) const override {
        const double qq = q();
        const double e2 = eps_ * eps_;
        const double g2 = cg_ * cg_;
        const bool quadratic = qq == 2.0;
        switch (set) {
            case AssumptionSet::one_sided_lipschitz:
                return Constants{{0.0}};
            case AssumptionSet::anti_sys:
                return Constants{{}, {0.0}, {2.0 * (e.p0 - 1.0) * g2}};
            case AssumptionSet::sch_gr_erg:
                return Constants{{1.0 - e2, 0.0}, {kappa_ - 2.0 * g2}};
            case AssumptionSet::diff_b_f_erg:
                return Constants{{2.0 * (qq + 1.0) * (qq + 1.0), 0.0},
                                 {2.0 * kappa_ * kappa_ * (qq + 1.0) * (qq + 1.0)}};
            case AssumptionSet::er_sch_b_f:
                return Constants{{std::min(1.0 - 2.0 * e2, 0.5), 0.0},
                                 {std::min(kappa_ - 4.0 * g2, 0.5 * kappa_)}};
            case AssumptionSet::er_sch_x_b_f:
                // The cross-term identities used here hold for q = 2 only.
                if (!quadratic) return std::nullopt;
                return Constants{{0.5, 1.0 - 2.0 * e2, 0.0}, {0.5 * kappa_, kappa_ - 4.0 * g2}};
            case AssumptionSet::er_sch_gr_b_f:
                if (!quadratic) return std::nullopt;
                return Constants{{2.0, 0.0}, {2.0 * kappa_ * kappa_}};
            default:
                return std::nullopt;
        }
    }

protected:
    void functional_drift(double, ConstVec x, const EmpiricalMeasure&, MutVec out) const override {
        const double radial = norm_power_from_squared(squared_norm(x), q());
        for (std::size_t k = 0; k < d(); ++k) out[k] = -x[k] - x[k] * radial;
    }
    void functional_diffusion(double, ConstVec x, const EmpiricalMeasure&, MutVec out) const override {
        std::array<double, kMaxDim> v{};
        for (std::size_t k = 0; k < d(); ++k) v[k] = eps_ * x[k];
        embed_diagonal(ConstVec(v.data(), d()), out);
    }
    void f_impl(ConstVec x, ConstVec y, MutVec out) const override {
        radial_kernel(x, y, kappa_, q(), true, out);
    }
    void g_impl(ConstVec x, ConstVec y, MutVec out) const override {
        std::array<double, kMaxDim> u{};
        for (std::size_t k = 0; k < d(); ++k) u[k] = cg_ * (x[k] - y[k]);
        embed_diagonal(ConstVec(u.data(), d()), out);
    }

private:
    double eps_, kappa_, cg_;
};

/// b~(x,y) = -a x|x|^2 + coupling (y - x), sigma~(x,y) = c_sigma (y - x) + nu,
/// with the cubic kernel f and linear kernel g. Pairwise measure dependence.
class PairwiseVlasov : public CoefficientModel {
public:
    PairwiseVlasov(std::size_t d, std::size_t l, double q, std::map<std::string, double> p)
        : CoefficientModel("pairwise-vlasov", d, l, q, MeasureMode::pairwise, true, std::move(p)),
          a_(param("cubic")),
          coupling_(param("coupling")),
          cs_(param("c_sigma")),
          nu_(param("nu")),
          kappa_(param("kappa")),
          cg_(param("c_g")) {
        require(a_ >= 0.0 && kappa_ >= 0.0 && coupling_ >= 0.0,
                "pairwise-vlasov: cubic, coupling and kappa must be >= 0");
    }

    bool kernel_f_is_zero() const override { return kappa_ == 0.0; }
    bool kernel_g_is_zero() const override { return cg_ == 0.0; }
    double kernel_growth_constant() const override { return kappa_; }

    std::optional<Constants> documented_constants(AssumptionSet set,
                                                  const ProbeExponents& e) const override {
        if (q() < 2.0) return std::nullopt;
        const double r = static_cast<double>(noise_rank());
        const double g2 = cg_ * cg_;
        const double s2 = cs_ * cs_;
        switch (set) {
            case AssumptionSet::one_sided_lipschitz:
                return Constants{{0.0}};
            case AssumptionSet::eu_b_sig:
                return Constants{
                    {0.5 * coupling_ + (e.p0 - 1.0) * std::max(4.0 * s2, 2.0 * nu_ * nu_ * r)},
                    {0.5 * coupling_ + 2.0 * s2}};
            case AssumptionSet::eu_f_g:
                return Constants{{(e.p0 - 1.0) * g2}, {kappa_}};
            case AssumptionSet::anti_sys:
                return Constants{{}, {0.0}, {2.0 * (e.p0 - 1.0) * g2}};
            case AssumptionSet::b_poly:
                return Constants{{a_ + coupling_}};
            case AssumptionSet::mon_rate:
                return Constants{{0.5 * coupling_ + 2.0 * (e.p1 - 1.0) * s2}, {2.0 * (e.p1 - 1.0) * g2}, {0.0}};
            default:
                return std::nullopt;
        }
    }

protected:
    void two_point_drift(double, ConstVec x, ConstVec y, MutVec out) const override {
        const double sq = squared_norm(x);
        for (std::size_t k = 0; k < d(); ++k) out[k] = -a_ * x[k] * sq + coupling_ * (y[k] - x[k]);
    }
    void two_point_diffusion(double, ConstVec x, ConstVec y, MutVec out) const override {
        std::array<double, kMaxDim> v{};
        for (std::size_t k = 0; k < d(); ++k) v[k] = cs_ * (y[k] - x[k]) + nu_;
        embed_diagonal(ConstVec(v.data(), d()), out);
    }
    void f_impl(ConstVec x, ConstVec y, MutVec out) const override {
        radial_kernel(x, y, kappa_, 2.0, false, out);
    }
    void g_impl(ConstVec x, ConstVec y, MutVec out) const override {
        std::array<double, kMaxDim> u{};
        for (std::size_t k = 0; k < d(); ++k) u[k] = cg_ * (x[k] - y[k]);
        embed_diagonal(ConstVec(u.data(), d()), out);
    }

private:
    double a_, coupling_, cs_, nu_, kappa_, cg_;
};

/// All-linear sanity family: b = -alpha x + lambda mean(mu), sigma = nu I,
/// f = -kappa (x - y), g = c_g (x - y). q = 0.
class LipschitzBaseline : public CoefficientModel {
public:
    LipschitzBaseline(std::size_t d, std::size_t l, double q, std::map<std::string, double> p)
        : CoefficientModel("lipschitz-baseline", d, l, q, MeasureMode::functional, true, std::move(p)),
          alpha_(param("alpha")),
          lambda_(param("lambda")),
          nu_(param("nu")),
          kappa_(param("kappa")),
          cg_(param("c_g")) {
        require(alpha_ >= 0.0 && kappa_ >= 0.0, "lipschitz-baseline: alpha and kappa must be >= 0");
    }

    bool kernel_f_is_zero() const override { return kappa_ == 0.0; }
    bool kernel_g_is_zero() const override { return cg_ == 0.0; }
    double kernel_growth_constant() const override { return kappa_; }

    std::optional<Constants> documented_constants(AssumptionSet set,
                                                  const ProbeExponents& e) const override {
        const double r = static_cast<double>(noise_rank());
        const double half_lambda = 0.5 * std::abs(lambda_);
        const double g2 = cg_ * cg_;
        switch (set) {
            case AssumptionSet::one_sided_lipschitz:
                return Constants{{0.0}};
            case AssumptionSet::eu_b_sig:
                return Constants{{std::max(half_lambda, (e.p0 - 1.0) * nu_ * nu_ * r)}, {half_lambda}};
            case AssumptionSet::eu_f_g:
                return Constants{{(e.p0 - 1.0) * g2}, {kappa_}};
            case AssumptionSet::anti_sys:
                return Constants{{}, {0.0}, {2.0 * (e.p0 - 1.0) * g2}};
            case AssumptionSet::b_poly:
                return Constants{{std::max(alpha_, std::abs(lambda_))}};
            case AssumptionSet::mon_rate:
                return Constants{{half_lambda}, {2.0 * (e.p1 - 1.0) * g2}, {0.0}};
            default:
                return std::nullopt;
        }
    }

protected:
    void functional_drift(double, ConstVec x, const EmpiricalMeasure& mu, MutVec out) const override {
        const ConstVec m = mu.mean();
        for (std::size_t k = 0; k < d(); ++k) out[k] = -alpha_ * x[k] + lambda_ * m[k];
    }
    void functional_diffusion(double, ConstVec, const EmpiricalMeasure&, MutVec out) const override {
        embed_constant_diagonal(nu_, out);
    }
    void f_impl(ConstVec x, ConstVec y, MutVec out) const override {
        for (std::size_t k = 0; k < d(); ++k) out[k] = -kappa_ * (x[k] - y[k]);
    }
    void g_impl(ConstVec x, ConstVec y, MutVec out) const override {
        std::array<double, kMaxDim> u{};
        for (std::size_t k = 0; k < d(); ++k) u[k] = cg_ * (x[k] - y[k]);
        embed_diagonal(ConstVec(u.data(), d()), out);
    }

private:
    double alpha_, lambda_, nu_, kappa_, cg_;
};

/// b = sigma = f = g = 0.
class ZeroModel : public CoefficientModel {
public:
    ZeroModel(std::size_t d, std::size_t l, double q, std::map<std::string, double> p)
        : CoefficientModel("zero", d, l, q, MeasureMode::functional, true, std::move(p)) {}

    bool kernel_f_is_zero() const override { return true; }
    bool kernel_g_is_zero() const override { return true; }
    double kernel_growth_constant() const override { return 0.0; }

    std::optional<Constants> documented_constants(AssumptionSet set,
                                                  const ProbeExponents&) const override {
        switch (set) {
            case AssumptionSet::one_sided_lipschitz: return Constants{{0.0}};
            case AssumptionSet::eu_b_sig: return Constants{{0.0}, {0.0}};
            case AssumptionSet::eu_f_g: return Constants{{0.0}, {0.0}};
            case AssumptionSet::anti_sys: return Constants{{}, {0.0}, {0.0}};
            case AssumptionSet::b_poly: return Constants{{0.0}};
            case AssumptionSet::mon_rate: return Constants{{0.0}, {0.0}, {0.0}};
            default: return std::nullopt;
        }
    }

protected:
    void functional_drift(double, ConstVec, const EmpiricalMeasure&, MutVec out) const override {
        std::fill(out.begin(), out.end(), 0.0);
    }
    void functional_diffusion(double, ConstVec, const EmpiricalMeasure&, MutVec out) const override {
        std::fill(out.begin(), out.end(), 0.0);
    }
    void f_impl(ConstVec, ConstVec, MutVec out) const override { std::fill(out.begin(), out.end(), 0.0); }
    void g_impl(ConstVec, ConstVec, MutVec out) const override { std::fill(out.begin(), out.end(), 0.0); }
};

const std::vector<FamilyInfo>& families() {
    static const std::vector<FamilyInfo> table = {
        {"cubic-mean-field", 2.0, MeasureMode::functional,
         {{"cubic", 1.0}, {"lambda", 0.5}, {"nu", 0.5}, {"kappa", 1.0}, {"c_g", 1.0}},
         "b = -cubic x|x|^2 + lambda mean(mu), sigma = nu I, f = -kappa (x-y)|x-y|^2, g = c_g (x-y)"},
        {"ergodic-dissipative", 2.0, MeasureMode::functional,
         {{"eps", 0.1}, {"kappa", 1.0}, {"c_g", 0.0}},
         "b = -x - x|x|^q, sigma = eps diag(x), f = -kappa (x-y)(1+|x-y|^q), g = c_g (x-y)"},
        {"pairwise-vlasov", 2.0, MeasureMode::pairwise,
         {{"cubic", 1.0}, {"coupling", 0.5}, {"c_sigma", 0.2}, {"nu", 0.5}, {"kappa", 1.0}, {"c_g", 0.2}},
         "b~ = -cubic x|x|^2 + coupling (y-x), sigma~ = c_sigma (y-x) + nu, f cubic, g = c_g (x-y)"},
        {"lipschitz-baseline", 0.0, MeasureMode::functional,
         {{"alpha", 1.0}, {"lambda", 0.0}, {"nu", 0.5}, {"kappa", 0.0}, {"c_g", 0.0}},
         "b = -alpha x + lambda mean(mu), sigma = nu I, f = -kappa (x-y), g = c_g (x-y)"},
        {"cubic-unstable", 2.0, MeasureMode::functional,
         {{"cubic", 1.0}, {"lambda", 0.0}, {"nu", 0.0}, {"kappa", 0.0}, {"c_g", 0.0}},
         "b = +cubic x|x|^2 (violates one-sided Lipschitz; for negative tests)"},
        {"zero", 0.0, MeasureMode::functional, {}, "b = sigma = f = g = 0"},
    };
    return table;
}

}  // namespace

std::vector<std::string> model_families() {
    std::vector<std::string> names;
    for (const auto& f : families()) names.push_back(f.id);
    return names;
}

const FamilyInfo& family_info(const std::string& family) {
    for (const auto& f : families())
        if (f.id == family) return f;
    throw ContractViolation("unknown model family '" + family + "'");
}

ModelPtr make_model(const ModelSpec& spec) {
    const FamilyInfo& info = family_info(spec.family);
    std::map<std::string, double> params = info.defaults;
    for (const auto& [name, value] : spec.params) {
        if (!params.contains(name))
            throw ContractViolation("family " + spec.family + " has no parameter '" + name + "'");
        require(std::isfinite(value), "parameter '" + name + "' must be finite");
        params[name] = value;
    }
    const double q = spec.q.value_or(info.default_q);

    if (spec.family == "cubic-mean-field")
        return std::make_shared<CubicMeanField>(spec.family, spec.d, spec.l, q, params, 1.0);
    if (spec.family == "cubic-unstable")
        return std::make_shared<CubicMeanField>(spec.family, spec.d, spec.l, q, params, -1.0);
    if (spec.family == "ergodic-dissipative")
        return std::make_shared<ErgodicDissipative>(spec.d, spec.l, q, params);
    if (spec.family == "pairwise-vlasov")
        return std::make_shared<PairwiseVlasov>(spec.d, spec.l, q, params);
    if (spec.family == "lipschitz-baseline")
        return std::make_shared<LipschitzBaseline>(spec.d, spec.l, q, params);
    return std::make_shared<ZeroModel>(spec.d, spec.l, q, params);
}

}  // namespace mvsde
