#include "mvsde/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mvsde/rng.hpp"

namespace mvsde {

std::string to_string(W2Method method) {
    switch (method) {
        case W2Method::sorted_1d: return "sorted_1d";
        case W2Method::exact_assignment: return "exact_assignment";
        case W2Method::sliced: return "sliced";
    }
    return "sorted_1d";
}

W2Method w2_method_from_string(const std::string& text) {
    if (text == "sorted_1d") return W2Method::sorted_1d;
    if (text == "exact_assignment") return W2Method::exact_assignment;
    if (text == "sliced") return W2Method::sliced;
    throw ContractViolation("unknown W2 method '" + text + "'");
}

namespace {

// Mean squared gap of the monotone coupling between two scalar samples.
double sorted_w2_squared(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> gaps(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) gaps[i] = (a[i] - b[i]) * (a[i] - b[i]);
    return order_independent_sum(gaps) / static_cast<double>(a.size());
}

std::vector<double> project(const EmpiricalMeasure& m, const double* direction) {
    std::vector<double> out(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) out[j] = dot(m.atom(j), ConstVec(direction, m.dim()));
    return out;
}

}  // namespace

std::vector<std::size_t> solve_assignment(const std::vector<double>& cost, std::size_t n) {
    require(cost.size() == n * n, "assignment: cost matrix has wrong size");
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials u (rows), v (columns); p[j] = row matched to column j.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

W2Result w2(const EmpiricalMeasure& a, const EmpiricalMeasure& b, W2Method method,
            const W2Options& options) {
    require(a.dim() == b.dim(), "w2: dimension mismatch");
    require(!a.empty() && !b.empty(), "w2: empty measure");
    W2Result result;
    switch (method) {
        case W2Method::sorted_1d: {
            require(a.dim() == 1, "w2: sorted_1d needs d = 1");
            require(a.size() == b.size(), "w2: sorted_1d needs equal atom counts");
            const auto ra = a.raw(), rb = b.raw();
            result.value = std::sqrt(sorted_w2_squared({ra.begin(), ra.end()}, {rb.begin(), rb.end()}));
            return result;
        }
        case W2Method::exact_assignment: {
            require(a.size() == b.size(), "w2: exact_assignment needs equal atom counts");
            const std::size_t n = a.size();
            if (n > options.assignment_cap)
                throw ResourceLimitExceeded("w2: " + std::to_string(n) + " atoms exceed the assignment cap " +
                                            std::to_string(options.assignment_cap));
            std::vector<double> cost(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = squared_distance(a.atom(i), b.atom(j));
            const auto match = solve_assignment(cost, n);
            std::vector<double> matched(n);
            for (std::size_t i = 0; i < n; ++i) matched[i] = cost[i * n + match[i]];
            result.value = std::sqrt(order_independent_sum(matched) / static_cast<double>(n));
            return result;
        }
        case W2Method::sliced: {
            require(options.projections >= 1, "w2: sliced needs at least one projection");
            require(a.size() == b.size(), "w2: sliced needs equal atom counts");
            const std::size_t d = a.dim();
            std::vector<double> squares(options.projections);
            for (std::size_t p = 0; p < options.projections; ++p) {
                std::array<double, kMaxDim> dir{};
                for (std::size_t k = 0; k < d; k += 2) {
                    const auto z = counter_normal_pair(options.seed, StreamDomain::projections, p, 0,
                                                       static_cast<std::uint32_t>(k / 2));
                    dir[k] = z[0];
                    if (k + 1 < d) dir[k + 1] = z[1];
                }
                const double r = norm(ConstVec(dir.data(), d));
                for (std::size_t k = 0; k < d; ++k) dir[k] /= r;
                squares[p] = sorted_w2_squared(project(a, dir.data()), project(b, dir.data()));
            }
            const double P = static_cast<double>(options.projections);
            std::vector<double> scratch = squares;
            const double mean = order_independent_sum(scratch) / P;
            double var = 0.0;
            if (options.projections > 1) {
                for (auto& s : scratch) s = (s - mean) * (s - mean);
                var = order_independent_sum(scratch) / (P - 1.0);
            }
            result.value = std::sqrt(mean);
            result.approximate = true;
            result.stderr_ = mean > 0.0 ? std::sqrt(var / P) / (2.0 * result.value) : 0.0;
            return result;
        }
    }
    return result;
}

RateFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
    require(xs.size() == ys.size(), "fit: xs and ys differ in length");
    require(xs.size() >= 2, "fit: need at least two points");
    RateFit fit;
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fit.points.emplace_back(xs[i], ys[i]);
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    require(sxx > 0.0, "fit: x values are all equal");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    // Constant ys are fitted perfectly by a flat line.
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

RateFit fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    require(xs.size() == ys.size(), "fit: xs and ys differ in length");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(xs[i]) && std::isfinite(ys[i]),
                "fit: log-log fit needs positive finite values");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    return fit_linear(lx, ly);
}

}  // namespace mvsde
