#pragma once

// Independent reference computations used by the tests. None of them call
// into the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

/// W2 between two equal-size uniform empiricals by enumerating every permutation.
inline double brute_force_w2(const std::vector<double>& a, const std::vector<double>& b, std::size_t d) {
    const std::size_t n = a.size() / d;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = a[i * d + k] - b[perm[i] * d + k];
                cost += diff * diff;
            }
        best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::sqrt(best / static_cast<double>(n));
}

/// RMS gap at time T between Euler with m steps and Euler with m_fine steps
/// (m divides m_fine) for dX = -a X dt + s dW, both driven by the same path.
///
/// Euler with step h maps the path to X_T = (1 - a h)^m x0 + s sum_j (1 - a h)^(m-1-j) dW_j,
/// which is linear in the fine increments. The gap is therefore a Gaussian
/// whose variance is h_fine times the sum over fine steps of the squared
/// difference of the two coefficients, plus the squared deterministic part.
inline double ou_euler_self_gap(double a, double s, double x0, double T, std::size_t m, std::size_t m_fine) {
    const double h = T / static_cast<double>(m), hf = T / static_cast<double>(m_fine);
    const std::size_t ratio = m_fine / m;
    double var = 0.0;
    for (std::size_t k = 0; k < m_fine; ++k) {
        const std::size_t j = k / ratio;
        const double coarse = s * std::pow(1.0 - a * h, static_cast<double>(m - 1 - j));
        const double fine = s * std::pow(1.0 - a * hf, static_cast<double>(m_fine - 1 - k));
        var += (coarse - fine) * (coarse - fine) * hf;
    }
    const double bias = x0 * (std::pow(1.0 - a * h, static_cast<double>(m)) -
                              std::pow(1.0 - a * hf, static_cast<double>(m_fine)));
    return std::sqrt(var + bias * bias);
}

}  // namespace oracle
