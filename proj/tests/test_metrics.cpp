#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mvsde/metrics.hpp"
#include "mvsde/rng.hpp"
#include "oracles.hpp"

using namespace mvsde;

namespace {

std::vector<double> gaussian_cloud(std::uint64_t seed, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; k += 2) {
        const auto z = counter_normal_pair(seed, StreamDomain::probe, k / 2, 0, 0);
        v[k] = z[0];
        if (k + 1 < count) v[k + 1] = z[1];
    }
    return v;
}

EmpiricalMeasure em(const std::vector<double>& atoms, std::size_t d) { return EmpiricalMeasure(atoms, d); }

}  // namespace

TEST_CASE("W2 small examples") {
    for (W2Method m : {W2Method::sorted_1d, W2Method::exact_assignment}) {
        CHECK(w2(em({0.0}, 1), em({1.0}, 1), m).value == 1.0);
        CHECK(w2(em({0.0, 2.0}, 1), em({1.0, 3.0}, 1), m).value == 1.0);
        CHECK(w2(em({3.0, 0.5, 2.0}, 1), em({2.0, 3.0, 0.5}, 1), m).value == 0.0);
    }
    CHECK(oracle::brute_force_w2({0.0, 2.0}, {1.0, 3.0}, 1) == 1.0);
    const auto s = w2(em({1.0, 2.0, 3.0, 4.0}, 2), em({1.0, 2.0, 3.0, 4.0}, 2),
                      W2Method::sliced);
    CHECK(s.value == 0.0);
    CHECK(s.approximate);
}

TEST_CASE("exact assignment equals the brute-force permutation minimum") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t n = 1 + s % 7, d = 1 + s % 3;
        const auto a = gaussian_cloud(100 + s, n * d), b = gaussian_cloud(200 + s, n * d);
        const double exact = w2(EmpiricalMeasure(a, d), EmpiricalMeasure(b, d), W2Method::exact_assignment).value;
        CHECK(std::abs(exact - oracle::brute_force_w2(a, b, d)) <= 1e-10);
    }
}

TEST_CASE("sorted coupling equals exact assignment in one dimension") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t n = 1 + (s * 13) % 64;
        const auto a = gaussian_cloud(300 + s, n), b = gaussian_cloud(400 + s, n);
        const double sorted = w2(EmpiricalMeasure(a, 1), EmpiricalMeasure(b, 1), W2Method::sorted_1d).value;
        const double exact = w2(EmpiricalMeasure(a, 1), EmpiricalMeasure(b, 1), W2Method::exact_assignment).value;
        CHECK(std::abs(sorted - exact) <= 1e-10);
    }
}

TEST_CASE("assignment solver on a fixed matrix") {
    const std::vector<double> cost = {4, 1, 3, 2, 0, 5, 3, 2, 2};
    const auto match = solve_assignment(cost, 3);
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) total += cost[i * 3 + match[i]];
    CHECK(total == 5.0);
    std::vector<std::size_t> sorted = match;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("W2 is symmetric and vanishes on identical samples") {
    const auto a = gaussian_cloud(5, 40), b = gaussian_cloud(6, 40);
    const EmpiricalMeasure ma(a, 2), mb(b, 2);
    CHECK(w2(ma, mb, W2Method::exact_assignment).value ==
          doctest::Approx(w2(mb, ma, W2Method::exact_assignment).value).epsilon(1e-12));
    CHECK(w2(ma, ma, W2Method::exact_assignment).value == 0.0);
}

TEST_CASE("translation shifts W2 by the offset") {
    auto a = gaussian_cloud(9, 30);
    std::vector<double> b = a;
    for (double& v : b) v += 2.5;
    CHECK(w2(EmpiricalMeasure(a, 1), EmpiricalMeasure(b, 1), W2Method::sorted_1d).value ==
          doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("sliced W2 is a lower bound with a seeded, reproducible value") {
    const auto a = gaussian_cloud(10, 200), b = gaussian_cloud(11, 200);
    const EmpiricalMeasure ma(a, 2), mb(b, 2);
    const auto s1 = w2(ma, mb, W2Method::sliced, {64, 3, 512});
    const auto s2 = w2(ma, mb, W2Method::sliced, {64, 3, 512});
    CHECK(s1.value == s2.value);
    CHECK(s1.stderr_ > 0.0);
    CHECK(s1.value <= w2(ma, mb, W2Method::exact_assignment).value + 1e-12);
}

TEST_CASE("W2 contract checks") {
    CHECK_THROWS_AS(w2(em({0.0, 1.0}, 2), em({0.0, 1.0}, 2), W2Method::sorted_1d),
                    ContractViolation);
    CHECK_THROWS_AS(w2(em({0.0, 1.0}, 1), em({0.0}, 1), W2Method::exact_assignment),
                    ContractViolation);
    const auto a = gaussian_cloud(1, 20), b = gaussian_cloud(2, 20);
    CHECK_THROWS_AS(w2(EmpiricalMeasure(a, 1), EmpiricalMeasure(b, 1), W2Method::exact_assignment, {64, 1, 10}),
                    ResourceLimitExceeded);
}

TEST_CASE("log-log fits") {
    auto f = fit_loglog_slope({1, 2, 4}, {1, 2, 4});
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-14));
    f = fit_loglog_slope({1, 4, 16}, {1, 2, 4});
    CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-14));
    f = fit_loglog_slope({1, 2, 4}, {3, 3, 3});
    CHECK(f.slope == doctest::Approx(0.0));
    CHECK(f.r_squared == 1.0);
    CHECK_THROWS_AS(fit_loglog_slope({1, 2}, {1, 0}), ContractViolation);
    const auto g = fit_linear({0, 1, 2}, {1, 3, 5});
    CHECK(g.slope == doctest::Approx(2.0));
    CHECK(g.intercept == doctest::Approx(1.0));
}
