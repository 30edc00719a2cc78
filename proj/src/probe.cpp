#include "mvsde/probe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "mvsde/rng.hpp"

namespace mvsde {

namespace {

constexpr double kSnapTolerance = 1e-10;

using Vec = std::array<double, kMaxDim>;
using Mat = std::array<double, kMaxDim * kMaxDim>;

struct Sample {
    Vec x{}, xp{}, y{}, yp{};
    std::array<double, 2 * kMaxDim> mu{}, mup{};
    double t = 0.0, tp = 0.0;
};

// lhs <= sum_c constants[c] * factors[c]; scale bounds the magnitude of the
// terms that were combined into lhs.
struct Evaluation {
    double lhs = 0.0;
    std::vector<double> factors;
    double scale = 0.0;
};

class Evaluator {
public:
    Evaluator(const CoefficientModel& model, const ProbeExponents& e) : m_(model), e_(e) {}

    std::size_t d() const { return m_.d(); }
    std::size_t dl() const { return m_.d() * m_.l(); }
    double q() const { return m_.q(); }
    const ProbeExponents& exponents() const { return e_; }

    ConstVec vec(const Vec& v) const { return ConstVec(v.data(), d()); }
    EmpiricalMeasure measure(const std::array<double, 2 * kMaxDim>& atoms) const {
        return EmpiricalMeasure(std::span<const double>(atoms.data(), 2 * d()), d());
    }

    Vec b(double t, const Vec& x, const EmpiricalMeasure& mu) const {
        Vec out{};
        m_.drift(t, vec(x), mu, MutVec(out.data(), d()));
        return out;
    }
    Mat s(double t, const Vec& x, const EmpiricalMeasure& mu) const {
        Mat out{};
        m_.diffusion(t, vec(x), mu, MutVec(out.data(), dl()));
        return out;
    }
    Vec f(const Vec& x, const Vec& y) const {
        Vec out{};
        m_.kernel_f(vec(x), vec(y), MutVec(out.data(), d()));
        return out;
    }
    Mat g(const Vec& x, const Vec& y) const {
        Mat out{};
        m_.kernel_g(vec(x), vec(y), MutVec(out.data(), dl()));
        return out;
    }

    double norm_d(const Vec& v) const { return norm(vec(v)); }
    double norm_m(const Mat& a) const { return norm(ConstVec(a.data(), dl())); }
    double dot_d(const Vec& a, const Vec& b) const { return dot(vec(a), vec(b)); }

    Vec diff(const Vec& a, const Vec& b) const {
        Vec out{};
        for (std::size_t k = 0; k < d(); ++k) out[k] = a[k] - b[k];
        return out;
    }
    /// |a * alpha - b * beta|^2 over n entries.
    template <class A>
    double weighted_gap2(const A& a, double alpha, const A& b, double beta, std::size_t n) const {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = a[k] * alpha - b[k] * beta;
            sum += v * v;
        }
        return sum;
    }
    double pw(double r, double exponent) const { return norm_power_from_squared(r * r, exponent); }

private:
    const CoefficientModel& m_;
    ProbeExponents e_;
};

using InequalityFn = std::function<Evaluation(const Evaluator&, const Sample&)>;

// (x - x', b(x, mu) - b(x', mu')) plus weight * |sigma(x, mu) - sigma(x', mu')|^2.
Evaluation monotone_b_sigma(const Evaluator& ev, const Sample& s, double weight, bool same_measure) {
    const auto mu = ev.measure(s.mu);
    const auto mup = ev.measure(same_measure ? s.mu : s.mup);
    const Vec b1 = ev.b(s.t, s.x, mu), b2 = ev.b(s.t, s.xp, mup);
    const Mat s1 = ev.s(s.t, s.x, mu), s2 = ev.s(s.t, s.xp, mup);
    const Vec dx = ev.diff(s.x, s.xp);
    const Vec db = ev.diff(b1, b2);
    const double gap = ev.weighted_gap2(s1, 1.0, s2, 1.0, ev.dl());
    Evaluation out;
    out.lhs = ev.dot_d(dx, db) + weight * gap;
    out.scale = ev.norm_d(dx) * (ev.norm_d(b1) + ev.norm_d(b2)) +
                weight * std::pow(ev.norm_m(s1) + ev.norm_m(s2), 2.0);
    return out;
}

// ((x-y) - (x'-y'), f(x,y) - f(x',y')) plus weight * |g(x,y) - g(x',y')|^2.
Evaluation monotone_f_g(const Evaluator& ev, const Sample& s, double weight) {
    const Vec f1 = ev.f(s.x, s.y), f2 = ev.f(s.xp, s.yp);
    const Mat g1 = ev.g(s.x, s.y), g2 = ev.g(s.xp, s.yp);
    const Vec du = ev.diff(ev.diff(s.x, s.y), ev.diff(s.xp, s.yp));
    const double gap = ev.weighted_gap2(g1, 1.0, g2, 1.0, ev.dl());
    Evaluation out;
    out.lhs = ev.dot_d(du, ev.diff(f1, f2)) + weight * gap;
    out.scale = ev.norm_d(du) * (ev.norm_d(f1) + ev.norm_d(f2)) +
                weight * std::pow(ev.norm_m(g1) + ev.norm_m(g2), 2.0);
    return out;
}

double dx2(const Evaluator& ev, const Sample& s) {
    const Vec dx = ev.diff(s.x, s.xp);
    return squared_norm(ev.vec(dx));
}

double du2(const Evaluator& ev, const Sample& s) {
    const Vec du = ev.diff(ev.diff(s.x, s.y), ev.diff(s.xp, s.yp));
    return squared_norm(ev.vec(du));
}

double w2mm(const Evaluator& ev, const Sample& s) {
    const std::size_t d = ev.d();
    return two_atom_w2_squared(ConstVec(s.mu.data(), d), ConstVec(s.mu.data() + d, d),
                               ConstVec(s.mup.data(), d), ConstVec(s.mup.data() + d, d));
}

double w2m0(const Evaluator& ev, const Sample& s) { return ev.measure(s.mu).second_moment(); }

std::vector<InequalityFn> inequalities(AssumptionSet set) {
    switch (set) {
        case AssumptionSet::one_sided_lipschitz:
            return {[](const Evaluator& ev, const Sample& s) {
                Evaluation e = monotone_b_sigma(ev, s, 0.0, true);
                e.factors = {dx2(ev, s)};
                return e;
            }};
        case AssumptionSet::eu_b_sig:
            return {
                [](const Evaluator& ev, const Sample& s) {
                    const auto mu = ev.measure(s.mu);
                    const Vec b = ev.b(s.t, s.x, mu);
                    const Mat sg = ev.s(s.t, s.x, mu);
                    const double p0 = ev.exponents().p0;
                    Evaluation e;
                    e.lhs = ev.dot_d(s.x, b) + (p0 - 1.0) * std::pow(ev.norm_m(sg), 2.0);
                    e.scale = ev.norm_d(s.x) * ev.norm_d(b) + (p0 - 1.0) * std::pow(ev.norm_m(sg), 2.0);
                    e.factors = {1.0 + std::pow(ev.norm_d(s.x), 2.0) + w2m0(ev, s)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    Evaluation e = monotone_b_sigma(ev, s, 1.0, false);
                    e.factors = {dx2(ev, s) + w2mm(ev, s)};
                    return e;
                }};
        case AssumptionSet::eu_f_g:
            return {
                [](const Evaluator& ev, const Sample& s) {
                    Evaluation e = monotone_f_g(ev, s, ev.exponents().p0 - 1.0);
                    e.factors = {du2(ev, s)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    const Vec f1 = ev.f(s.x, s.y), f2 = ev.f(s.xp, s.yp);
                    const double u1 = ev.norm_d(ev.diff(s.x, s.y)), u2 = ev.norm_d(ev.diff(s.xp, s.yp));
                    Evaluation e;
                    e.lhs = ev.norm_d(ev.diff(f1, f2));
                    e.scale = ev.norm_d(f1) + ev.norm_d(f2);
                    e.factors = {std::pow(1.0 + u1 + u2, ev.q()) * std::sqrt(du2(ev, s))};
                    return e;
                }};
        case AssumptionSet::anti_sys:
            return {
                [](const Evaluator& ev, const Sample& s) {
                    const Vec f1 = ev.f(s.x, s.y), f2 = ev.f(s.y, s.x);
                    Vec sum{};
                    for (std::size_t k = 0; k < ev.d(); ++k) sum[k] = f1[k] + f2[k];
                    Evaluation e;
                    e.lhs = ev.norm_d(sum);
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    const double p0 = ev.exponents().p0;
                    const Vec f = ev.f(s.x, s.y);
                    Vec plus{};
                    for (std::size_t k = 0; k < ev.d(); ++k) plus[k] = s.x[k] + s.y[k];
                    const double ax = ev.pw(ev.norm_d(s.x), p0 - 2.0), ay = ev.pw(ev.norm_d(s.y), p0 - 2.0);
                    Evaluation e;
                    e.lhs = (ax - ay) * ev.dot_d(plus, f);
                    e.scale = (ax + ay) * ev.norm_d(plus) * ev.norm_d(f);
                    e.factors = {ev.pw(ev.norm_d(s.x), p0) + ev.pw(ev.norm_d(s.y), p0)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    const double p0 = ev.exponents().p0;
                    const Vec f = ev.f(s.x, s.y);
                    const Mat g = ev.g(s.x, s.y);
                    const Vec u = ev.diff(s.x, s.y);
                    const double g2 = std::pow(ev.norm_m(g), 2.0);
                    Evaluation e;
                    e.lhs = ev.dot_d(u, f) + 2.0 * (p0 - 1.0) * g2;
                    e.scale = ev.norm_d(u) * ev.norm_d(f) + 2.0 * (p0 - 1.0) * g2;
                    e.factors = {1.0 + squared_norm(ev.vec(u))};
                    return e;
                }};
        case AssumptionSet::b_poly:
            return {[](const Evaluator& ev, const Sample& s) {
                const Vec b1 = ev.b(s.t, s.x, ev.measure(s.mu)), b2 = ev.b(s.t, s.xp, ev.measure(s.mup));
                Evaluation e;
                e.lhs = ev.norm_d(ev.diff(b1, b2));
                e.scale = ev.norm_d(b1) + ev.norm_d(b2);
                e.factors = {std::pow(1.0 + ev.norm_d(s.x) + ev.norm_d(s.xp), ev.q()) * std::sqrt(dx2(ev, s)) +
                             std::sqrt(w2mm(ev, s))};
                return e;
            }};
        case AssumptionSet::mon_rate:
            return {
                [](const Evaluator& ev, const Sample& s) {
                    Evaluation e = monotone_b_sigma(ev, s, ev.exponents().p1 - 1.0, false);
                    e.factors = {dx2(ev, s) + w2mm(ev, s)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    Evaluation e = monotone_f_g(ev, s, 2.0 * (ev.exponents().p1 - 1.0));
                    e.factors = {du2(ev, s)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    const auto mu = ev.measure(s.mu);
                    const Vec b1 = ev.b(s.t, s.x, mu), b2 = ev.b(s.tp, s.x, mu);
                    const Mat s1 = ev.s(s.t, s.x, mu), s2 = ev.s(s.tp, s.x, mu);
                    Evaluation e;
                    e.lhs = ev.norm_d(ev.diff(b1, b2)) + std::sqrt(ev.weighted_gap2(s1, 1.0, s2, 1.0, ev.dl()));
                    e.scale = ev.norm_d(b1) + ev.norm_d(b2) + ev.norm_m(s1) + ev.norm_m(s2);
                    e.factors = {std::sqrt(std::abs(s.t - s.tp))};
                    return e;
                }};
        case AssumptionSet::sch_gr_erg:
            return {
                [](const Evaluator& ev, const Sample& s) {
                    const auto mu = ev.measure(s.mu);
                    const Vec b = ev.b(s.t, s.x, mu);
                    const double s2 = std::pow(ev.norm_m(ev.s(s.t, s.x, mu)), 2.0);
                    const double r = ev.norm_d(s.x);
                    Evaluation e;
                    e.lhs = ev.dot_d(s.x, b) + s2;
                    e.scale = r * ev.norm_d(b) + s2;
                    e.factors = {-(1.0 + ev.pw(r, ev.q())) * r * r, w2m0(ev, s)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    const Vec f = ev.f(s.x, s.y);
                    const double g2 = std::pow(ev.norm_m(ev.g(s.x, s.y)), 2.0);
                    const Vec u = ev.diff(s.x, s.y);
                    const double r = ev.norm_d(u);
                    Evaluation e;
                    e.lhs = ev.dot_d(u, f) + 2.0 * g2;
                    e.scale = r * ev.norm_d(f) + 2.0 * g2;
                    e.factors = {-(1.0 + ev.pw(r, ev.q())) * r * r};
                    return e;
                }};
        case AssumptionSet::diff_b_f_erg:
            return {
                [](const Evaluator& ev, const Sample& s) {
                    const Vec b1 = ev.b(s.t, s.x, ev.measure(s.mu)), b2 = ev.b(s.t, s.xp, ev.measure(s.mup));
                    const double q2 = 2.0 * ev.q();
                    Evaluation e;
                    e.lhs = std::pow(ev.norm_d(ev.diff(b1, b2)), 2.0);
                    e.scale = std::pow(ev.norm_d(b1) + ev.norm_d(b2), 2.0);
                    e.factors = {(1.0 + ev.pw(ev.norm_d(s.x), q2) + ev.pw(ev.norm_d(s.xp), q2)) * dx2(ev, s),
                                 w2mm(ev, s)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    const Vec f1 = ev.f(s.x, s.y), f2 = ev.f(s.xp, s.yp);
                    const double q2 = 2.0 * ev.q();
                    const double u1 = ev.norm_d(ev.diff(s.x, s.y)), u2 = ev.norm_d(ev.diff(s.xp, s.yp));
                    Evaluation e;
                    e.lhs = std::pow(ev.norm_d(ev.diff(f1, f2)), 2.0);
                    e.scale = std::pow(ev.norm_d(f1) + ev.norm_d(f2), 2.0);
                    e.factors = {(1.0 + ev.pw(u1, q2) + ev.pw(u2, q2)) * du2(ev, s)};
                    return e;
                }};
        case AssumptionSet::er_sch_b_f:
            return {
                [](const Evaluator& ev, const Sample& s) {
                    Evaluation e = monotone_b_sigma(ev, s, 2.0, false);
                    const double grow = 1.0 + ev.pw(ev.norm_d(s.x), ev.q()) + ev.pw(ev.norm_d(s.xp), ev.q());
                    e.factors = {-grow * dx2(ev, s), w2mm(ev, s)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    Evaluation e = monotone_f_g(ev, s, 4.0);
                    const double u1 = ev.norm_d(ev.diff(s.x, s.y)), u2 = ev.norm_d(ev.diff(s.xp, s.yp));
                    e.factors = {-(1.0 + ev.pw(u1, ev.q()) + ev.pw(u2, ev.q())) * du2(ev, s)};
                    return e;
                }};
        case AssumptionSet::er_sch_x_b_f:
            return {
                [](const Evaluator& ev, const Sample& s) {
                    const auto mu = ev.measure(s.mu), mup = ev.measure(s.mup);
                    const Vec b1 = ev.b(s.t, s.x, mu), b2 = ev.b(s.t, s.xp, mup);
                    const Mat s1 = ev.s(s.t, s.x, mu), s2 = ev.s(s.t, s.xp, mup);
                    const double ax = ev.pw(ev.norm_d(s.x), ev.q()), axp = ev.pw(ev.norm_d(s.xp), ev.q());
                    const Vec dx = ev.diff(s.x, s.xp);
                    Vec wb{};
                    for (std::size_t k = 0; k < ev.d(); ++k) wb[k] = b1[k] * axp - b2[k] * ax;
                    const double gap = ev.weighted_gap2(s1, axp, s2, ax, ev.dl());
                    Evaluation e;
                    e.lhs = ev.dot_d(dx, wb) + 2.0 * gap;
                    e.scale = ev.norm_d(dx) * (ev.norm_d(b1) * axp + ev.norm_d(b2) * ax) +
                              2.0 * std::pow(ev.norm_m(s1) * axp + ev.norm_m(s2) * ax, 2.0);
                    const double r2 = dx2(ev, s);
                    e.factors = {(1.0 + ax + axp) * r2, -ax * axp * r2, w2mm(ev, s)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    const Vec f1 = ev.f(s.x, s.y), f2 = ev.f(s.xp, s.yp);
                    const Mat g1 = ev.g(s.x, s.y), g2 = ev.g(s.xp, s.yp);
                    const double au = ev.pw(ev.norm_d(ev.diff(s.x, s.y)), ev.q());
                    const double aup = ev.pw(ev.norm_d(ev.diff(s.xp, s.yp)), ev.q());
                    const Vec du = ev.diff(ev.diff(s.x, s.y), ev.diff(s.xp, s.yp));
                    Vec wf{};
                    for (std::size_t k = 0; k < ev.d(); ++k) wf[k] = f1[k] * aup - f2[k] * au;
                    const double gap = ev.weighted_gap2(g1, aup, g2, au, ev.dl());
                    Evaluation e;
                    e.lhs = ev.dot_d(du, wf) + 4.0 * gap;
                    e.scale = ev.norm_d(du) * (ev.norm_d(f1) * aup + ev.norm_d(f2) * au) +
                              4.0 * std::pow(ev.norm_m(g1) * aup + ev.norm_m(g2) * au, 2.0);
                    const double r2 = du2(ev, s);
                    e.factors = {(1.0 + au + aup) * r2, -au * aup * r2};
                    return e;
                }};
        case AssumptionSet::er_sch_gr_b_f:
            return {
                [](const Evaluator& ev, const Sample& s) {
                    const Vec b1 = ev.b(s.t, s.x, ev.measure(s.mu)), b2 = ev.b(s.t, s.xp, ev.measure(s.mup));
                    const double ax = ev.pw(ev.norm_d(s.x), ev.q()), axp = ev.pw(ev.norm_d(s.xp), ev.q());
                    Evaluation e;
                    e.lhs = ev.weighted_gap2(b1, axp, b2, ax, ev.d());
                    e.scale = std::pow(ev.norm_d(b1) * axp + ev.norm_d(b2) * ax, 2.0);
                    e.factors = {(1.0 + ax * ax + axp * axp + ax * ax * axp * axp) * dx2(ev, s), w2mm(ev, s)};
                    return e;
                },
                [](const Evaluator& ev, const Sample& s) {
                    const Vec f1 = ev.f(s.x, s.y), f2 = ev.f(s.xp, s.yp);
                    const double au = ev.pw(ev.norm_d(ev.diff(s.x, s.y)), ev.q());
                    const double aup = ev.pw(ev.norm_d(ev.diff(s.xp, s.yp)), ev.q());
                    Evaluation e;
                    e.lhs = ev.weighted_gap2(f1, aup, f2, au, ev.d());
                    e.scale = std::pow(ev.norm_d(f1) * aup + ev.norm_d(f2) * au, 2.0);
                    e.factors = {(1.0 + au * au + aup * aup + au * au * aup * aup) * du2(ev, s)};
                    return e;
                }};
    }
    throw ContractViolation("unknown assumption set");
}

void sample_ball(std::uint64_t seed, std::uint64_t index, std::uint32_t point, std::size_t d,
                 double radius, double* out) {
    for (std::size_t k = 0; k < d; k += 2) {
        const auto z = counter_normal_pair(seed, StreamDomain::probe, index, point,
                                           static_cast<std::uint32_t>(k / 2));
        out[k] = z[0];
        if (k + 1 < d) out[k + 1] = z[1];
    }
    const double r = norm(ConstVec(out, d));
    const double u = counter_uniforms(seed, StreamDomain::probe, index, point, 1000)[0];
    const double target = radius * std::pow(u, 1.0 / static_cast<double>(d));
    for (std::size_t k = 0; k < d; ++k) out[k] = r > 0.0 ? out[k] / r * target : 0.0;
}

Sample draw(std::uint64_t seed, std::uint64_t index, std::size_t d, double radius) {
    Sample s;
    sample_ball(seed, index, 0, d, radius, s.x.data());
    sample_ball(seed, index, 1, d, radius, s.xp.data());
    sample_ball(seed, index, 2, d, radius, s.y.data());
    sample_ball(seed, index, 3, d, radius, s.yp.data());
    sample_ball(seed, index, 4, d, radius, s.mu.data());
    sample_ball(seed, index, 5, d, radius, s.mu.data() + d);
    sample_ball(seed, index, 6, d, radius, s.mup.data());
    sample_ball(seed, index, 7, d, radius, s.mup.data() + d);
    const auto times = counter_uniforms(seed, StreamDomain::probe, index, 8, 0);
    s.t = radius * times[0];
    s.tp = radius * times[1];
    return s;
}

}  // namespace

bool AssumptionReport::holds() const {
    return std::all_of(inequalities.begin(), inequalities.end(),
                       [](const InequalityRecord& r) { return r.holds; });
}

const std::vector<std::vector<std::string>>& assumption_constant_names(AssumptionSet set) {
    static const std::map<AssumptionSet, std::vector<std::vector<std::string>>> table = {
        {AssumptionSet::one_sided_lipschitz, {{"L"}}},
        {AssumptionSet::eu_b_sig, {{"L"}, {"L"}}},
        {AssumptionSet::eu_f_g, {{"L"}, {"L"}}},
        {AssumptionSet::anti_sys, {{}, {"L"}, {"L"}}},
        {AssumptionSet::b_poly, {{"L"}}},
        {AssumptionSet::mon_rate, {{"L"}, {"L"}, {"L"}}},
        {AssumptionSet::sch_gr_erg, {{"hatL_bs1", "hatL_bs2"}, {"hatL_fg1"}}},
        {AssumptionSet::diff_b_f_erg, {{"L_b1", "L_b2"}, {"L_f1"}}},
        {AssumptionSet::er_sch_b_f, {{"L_bs1", "L_bs2"}, {"L_fg1"}}},
        {AssumptionSet::er_sch_x_b_f, {{"L_bs3", "L_bs4", "L_bs5"}, {"L_fg2", "L_fg3"}}},
        {AssumptionSet::er_sch_gr_b_f, {{"L_b3", "L_b4"}, {"L_f2"}}},
    };
    return table.at(set);
}

double two_atom_w2_squared(ConstVec a1, ConstVec a2, ConstVec b1, ConstVec b2) {
    const double straight = 0.5 * (squared_distance(a1, b1) + squared_distance(a2, b2));
    const double crossed = 0.5 * (squared_distance(a1, b2) + squared_distance(a2, b1));
    return std::min(straight, crossed);
}

AssumptionReport probe_assumptions(const CoefficientModel& model, AssumptionSet set,
                                   const ProbeSpec& spec) {
    require(spec.count >= 1, "probe: sample count must be >= 1");
    require(spec.radius > 0.0 && std::isfinite(spec.radius), "probe: radius must be positive");

    const auto& names = assumption_constant_names(set);
    const auto documented = model.documented_constants(set, spec.exponents);
    std::vector<std::vector<double>> constants(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t c = 0; c < names[i].size(); ++c) {
            auto it = spec.constants.find(names[i][c]);
            if (it != spec.constants.end()) {
                constants[i].push_back(it->second);
            } else if (documented) {
                constants[i].push_back((*documented)[i][c]);
            } else {
                throw ContractViolation("probe: family " + model.family_id() +
                                        " documents no constants for " + to_string(set) +
                                        "; supply " + names[i][c] + " explicitly");
            }
        }
    }

    const Evaluator ev(model, spec.exponents);
    const auto fns = inequalities(set);

    AssumptionReport report{set, spec.count, spec.radius, spec.seed, spec.exponents, {}};
    for (std::size_t i = 0; i < fns.size(); ++i) {
        InequalityRecord rec;
        rec.assumption_id = to_string(set) + "." + std::to_string(i + 1);
        rec.constant_names = names[i];
        rec.constants = constants[i];
        rec.sample_count = spec.count;
        rec.worst_margin = -std::numeric_limits<double>::infinity();
        double fit_low = std::numeric_limits<double>::infinity();
        double fit_high = -std::numeric_limits<double>::infinity();
        bool factor_negative = false;
        for (std::size_t n = 0; n < spec.count; ++n) {
            const Sample s = draw(spec.seed, n, model.d(), spec.radius);
            const Evaluation e = fns[i](ev, s);
            double rhs = 0.0, rhs_scale = 0.0;
            for (std::size_t c = 0; c < rec.constants.size(); ++c) {
                rhs += rec.constants[c] * e.factors[c];
                rhs_scale += std::abs(rec.constants[c] * e.factors[c]);
            }
            double margin = e.lhs - rhs;
            if (std::isnan(margin)) margin = std::numeric_limits<double>::infinity();
            if (std::abs(margin) <= kSnapTolerance * (e.scale + rhs_scale + std::abs(e.lhs))) margin = 0.0;
            rec.worst_margin = std::max(rec.worst_margin, margin);

            if (!rec.constants.empty() && e.factors[0] != 0.0) {
                const double rest = rhs - rec.constants[0] * e.factors[0];
                const double ratio = (e.lhs - rest) / e.factors[0];
                factor_negative = e.factors[0] < 0.0;
                fit_low = std::min(fit_low, ratio);
                fit_high = std::max(fit_high, ratio);
                ++rec.fit_samples;
            }
        }
        if (rec.fit_samples > 0) rec.fitted_constant = factor_negative ? fit_low : fit_high;
        rec.holds = rec.worst_margin <= 0.0;
        report.inequalities.push_back(std::move(rec));
    }
    return report;
}

}  // namespace mvsde
