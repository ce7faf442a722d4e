#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "mcdens/budget.hpp"
#include "mcdens/geometry.hpp"
#include "mcdens/rng.hpp"

using namespace mcdens;

namespace {

// Independent Gamma oracle: Spouge's series in long double (a = 20 keeps the
// truncation error far below 1e-12 relative).
long double lgamma_spouge(long double z) {
    constexpr int a = 20;
    long double acc = std::sqrt(2.0L * std::numbers::pi_v<long double>);
    long double fact = 1.0L;
    for (int k = 1; k < a; ++k) {
        const long double ak = static_cast<long double>(a - k);
        const long double ck = std::pow(ak, k - 0.5L) * std::exp(ak) / fact;
        acc += (k % 2 == 1 ? ck : -ck) / (z - 1.0L + k);
        fact *= k;
    }
    const long double t = z - 1.0L + a;
    return (z - 0.5L) * std::log(t) - t + std::log(acc);
}

double gamma_oracle(double z) { return std::exp(static_cast<double>(lgamma_spouge(z))); }

// Exact closed forms: V_{2k} = pi^k / k!, V_{2k+1} = 2 k! (4 pi)^k / (2k+1)!.
double ball_volume_oracle(int d) {
    if (d == 0) return 1.0;
    if (d % 2 == 0) {
        const int k = d / 2;
        long double v = 1.0L;
        for (int i = 1; i <= k; ++i) v *= std::numbers::pi_v<long double> / i;
        return static_cast<double>(v);
    }
    const int k = (d - 1) / 2;
    long double num = 2.0L;
    for (int i = 1; i <= k; ++i) num *= i * 4.0L * std::numbers::pi_v<long double>;
    long double den = 1.0L;
    for (int i = 1; i <= d; ++i) den *= i;
    return static_cast<double>(num / den);
}

}  // namespace

TEST_CASE("unit ball volume") {
    CHECK(vol_unit_ball(1) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(vol_unit_ball(2) == Catch::Approx(std::numbers::pi).epsilon(1e-12));
    CHECK(vol_unit_ball(3) == Catch::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-12));
    for (int d = 1; d <= 20; ++d)
        CHECK(vol_unit_ball(d) == Catch::Approx(ball_volume_oracle(d)).epsilon(1e-12));
    CHECK_THROWS_AS(vol_unit_ball(0), std::invalid_argument);
}

TEST_CASE("gamma half ratio against the Spouge oracle") {
    CHECK(gamma_half_ratio(0.5) == Catch::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(gamma_half_ratio(1.0) == Catch::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-12));
    CHECK(gamma_half_ratio(10.0) <= std::sqrt(10.0));
    for (double z : {0.25, 0.5, 1.0, 2.5, 10.0, 37.5}) {
        const double oracle = gamma_oracle(z + 0.5) / gamma_oracle(z);
        CHECK(gamma_half_ratio(z) == Catch::Approx(oracle).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gamma_half_ratio(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_half_ratio(-1.0), std::domain_error);
}

TEST_CASE("gamma and volume inequalities for d = 1..20") {
    for (int d = 1; d <= 20; ++d) {
        const double z = (d + 1) / 2.0;
        CHECK(gamma_half_ratio(z) <= std::sqrt(z));
        const double prev = d == 1 ? 1.0 : vol_unit_ball(d - 1);
        CHECK(prev / vol_unit_ball(d) <= std::sqrt((d + 1) / (2.0 * std::numbers::pi)));
    }
}

TEST_CASE("rejection Monte Carlo reproduces the ball volume") {
    RngStream rng(2024, 0);
    const std::int64_t samples = 1000000;
    for (int d = 1; d <= 5; ++d) {
        std::int64_t hits = 0;
        for (std::int64_t t = 0; t < samples; ++t) {
            double sq = 0.0;
            for (int i = 0; i < d; ++i) {
                const double v = 2.0 * rng.next_double() - 1.0;
                sq += v * v;
            }
            if (sq <= 1.0) ++hits;
        }
        const double p_true = vol_unit_ball(d) / std::pow(2.0, d);
        const double sigma = std::sqrt(p_true * (1.0 - p_true) / samples);
        const double p_hat = static_cast<double>(hits) / samples;
        CHECK(std::abs(p_hat - p_true) <= 3.0 * sigma);
    }
}

TEST_CASE("membership") {
    const ConvexBody ball = ConvexBody::unit_ball(2);
    const ConvexBody cube = ConvexBody::axis_cube(3);
    ChainBudget budget;
    CHECK(membership(ball, {0.0, 0.0}, budget));
    CHECK_FALSE(membership(ball, {1.5, 0.0}, budget));
    CHECK(membership(ball, {1.0, 0.0}, budget));  // boundary is inside
    CHECK(membership(cube, {0.5, 0.5, 1.0}, budget));
    CHECK(budget.membership_calls == 4);
    CHECK_THROWS_AS(ball.contains({0.1, 0.2, 0.3}), std::invalid_argument);
    CHECK(ball.contains(ball.center()));
    CHECK(cube.contains(cube.center()));
}

TEST_CASE("uniform sampling stays inside and has the right marginals") {
    RngStream rng(5, 1);
    ChainBudget budget;

    const ConvexBody interval = ConvexBody::unit_interval();
    const std::int64_t n = 1000000;
    double mean = 0.0;
    for (std::int64_t t = 0; t < n; ++t) mean += interval.sample_uniform(rng, budget)[0];
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean - 0.5) <= 3.0 / std::sqrt(12.0) / 1e3);
    CHECK(budget.rng_draws == static_cast<std::uint64_t>(n));

    const ConvexBody ball = ConvexBody::unit_ball(2);
    std::int64_t inside_half = 0;
    for (std::int64_t t = 0; t < n; ++t) {
        const Point x = ball.sample_uniform(rng, budget);
        REQUIRE(ball.contains(x));
        if (squared_norm(x) <= 0.5) ++inside_half;
    }
    // P(|x| <= 1/sqrt 2) is the area ratio 1/2
    CHECK(std::abs(inside_half / static_cast<double>(n) - 0.5) <= 0.0015);

    const ConvexBody cube = ConvexBody::axis_cube(4);
    for (int t = 0; t < 100; ++t) REQUIRE(cube.contains(cube.sample_uniform(rng, budget)));
}

TEST_CASE("packing on the ball") {
    SECTION("single ball sits at the center") {
        const Packing p = packing_on_ball(1, 2);
        REQUIRE(p.centers.size() == 1);
        CHECK(p.radius == Catch::Approx(0.5));
        CHECK(norm(p.centers[0]) == Catch::Approx(0.0).margin(1e-15));
    }

    SECTION("two balls on the line sit at +-1/2") {
        const Packing p = packing_on_ball(2, 1);
        REQUIRE(p.centers.size() == 2);
        CHECK(p.radius == Catch::Approx(0.25));
        std::set<double> xs{p.centers[0][0], p.centers[1][0]};
        CHECK(xs == std::set<double>{-0.5, 0.5});
    }

    SECTION("four balls in the plane") {
        const Packing p = packing_on_ball(4, 2);
        REQUIRE(p.centers.size() == 4);
        CHECK(p.radius == Catch::Approx(0.25));
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(norm(p.centers[i]) <= 1.0 - p.radius + 1e-12);
            for (std::size_t j = i + 1; j < 4; ++j)
                CHECK(distance(p.centers[i], p.centers[j]) >= 2.0 * p.radius - 1e-12);
        }
    }

    SECTION("invariants hold across a parameter sweep") {
        for (int d : {1, 2, 3}) {
            for (int m : {1, 4, 8, 16, 32}) {
                Packing p;
                try {
                    p = packing_on_ball(m, d);
                } catch (const PackingError&) {
                    continue;  // infeasible for the deterministic grid; allowed
                }
                REQUIRE(static_cast<int>(p.centers.size()) == m);
                CHECK(p.radius == Catch::Approx(0.5 * std::pow(m, -1.0 / d)));
                for (std::size_t i = 0; i < p.centers.size(); ++i) {
                    CHECK(norm(p.centers[i]) <= 1.0 - p.radius + 1e-12);
                    for (std::size_t j = i + 1; j < p.centers.size(); ++j)
                        CHECK(distance(p.centers[i], p.centers[j]) >=
                              2.0 * p.radius - 1e-12);
                }
            }
        }
    }

    SECTION("infeasible grid reports failure") {
        CHECK_THROWS_AS(packing_on_ball(2, 2), PackingError);
        CHECK_THROWS_AS(packing_on_ball(0, 2), std::invalid_argument);
    }
}
