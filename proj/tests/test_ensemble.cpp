#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "mvsde/ensemble.hpp"

using namespace mvsde;

TEST_CASE("empirical moments") {
    CHECK(empirical_moment(ParticleEnsemble(2, 1, {1.0, -1.0}), 2.0) == 1.0);
    CHECK(empirical_moment(ParticleEnsemble(3, 2), 4.0) == 0.0);
    CHECK(empirical_moment(ParticleEnsemble(1, 1, {3.0}), 4.0) == 81.0);
    CHECK_THROWS_AS(empirical_moment(ParticleEnsemble(1, 1, {3.0}), 0.5), ContractViolation);
}

TEST_CASE("moment of an overflowed ensemble is the sentinel") {
    ParticleEnsemble e(2, 1, {1.0, std::numeric_limits<double>::infinity()});
    CHECK(e.overflowed());
    CHECK(empirical_moment(e, 2.0) == kExplosionSentinel);
}

TEST_CASE("moments do not depend on particle order") {
    ParticleEnsemble a(4, 1, {1e16, 1.0, -1e16, 3.0});
    ParticleEnsemble b(4, 1, {3.0, -1e16, 1.0, 1e16});
    CHECK(empirical_moment(a, 1.0) == empirical_moment(b, 1.0));
}

TEST_CASE("W2 to the origin") {
    CHECK(w2_to_origin(ParticleEnsemble(5, 3)) == 0.0);
    CHECK(w2_to_origin(ParticleEnsemble(1, 1, {3.0})) == 3.0);
    CHECK(w2_to_origin(ParticleEnsemble(2, 1, {0.0, 4.0})) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
}

TEST_CASE("snapshot csv") {
    std::ostringstream s;
    snapshot_csv(ParticleEnsemble(2, 2, {1.0, -0.5, std::numeric_limits<double>::infinity(), 2.0}), 0.25, s);
    CHECK(s.str() ==
          "# t=0.25 N=2 d=2\n"
          "1.0000000000000000e+00,-5.0000000000000000e-01\n"
          "inf,2.0000000000000000e+00\n");
}

TEST_CASE("initial laws") {
    const auto point = sample_initial({InitialLaw::Kind::point, 3.0, 0.0}, 4, 2, 1);
    CHECK(point.states() == std::vector<double>(8, 3.0));

    const auto g = sample_initial({InitialLaw::Kind::gaussian, 1.0, 2.0}, 20000, 1, 5);
    const double m = g.measure().mean()[0];
    CHECK(std::abs(m - 1.0) < 0.05);
    CHECK(std::abs(empirical_moment(g, 2.0) - 5.0) < 0.2);

    const auto ball = sample_initial({InitialLaw::Kind::uniform_ball, 0.5, 2.0}, 5000, 3, 5);
    double inside = 0.0;
    for (std::size_t i = 0; i < ball.size(); ++i) {
        const auto x = ball.particle(i);
        const double r = std::sqrt((x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5) +
                                   (x[2] - 0.5) * (x[2] - 0.5));
        CHECK(r <= 2.0);
        inside += r <= 1.0 ? 1.0 : 0.0;
    }
    // volume fraction (1/2)^3
    CHECK(std::abs(inside / 5000.0 - 0.125) < 0.02);
}

TEST_CASE("initial draws are prefix-consistent") {
    const InitialLaw law{InitialLaw::Kind::gaussian, 0.0, 1.0};
    const auto big = sample_initial(law, 100, 3, 42);
    const auto small = sample_initial(law, 10, 3, 42);
    CHECK(big.prefix(10).states() == small.states());
    CHECK(sample_initial(law, 10, 3, 43).states() != small.states());
}
