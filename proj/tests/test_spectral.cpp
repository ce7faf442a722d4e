#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "mcdens/experiments.hpp"
#include "mcdens/spectral.hpp"

using namespace mcdens;

namespace {

DiscreteChain two_state(double p) {
    DiscreteChain c;
    c.states = 2;
    c.kernel = {1.0 - p, p, p, 1.0 - p};
    c.pi = {0.5, 0.5};
    return c;
}

DiscreteChain rank_one(const std::vector<double>& pi) {
    DiscreteChain c;
    c.states = static_cast<int>(pi.size());
    c.pi = pi;
    c.kernel.resize(pi.size() * pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i)
        for (std::size_t j = 0; j < pi.size(); ++j) c.kernel[i * pi.size() + j] = pi[j];
    return c;
}

// Independent second-eigenvalue oracle: power iteration on S + I after
// deflating the known top eigenpair (2, sqrt(pi)).
double power_iteration_beta(const DiscreteChain& chain, int iters) {
    const int N = chain.states;
    std::vector<double> s(static_cast<std::size_t>(N) * N);
    std::vector<double> u1(N);
    for (int i = 0; i < N; ++i) u1[i] = std::sqrt(chain.pi[i]);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            s[static_cast<std::size_t>(i) * N + j] =
                std::sqrt(chain.pi[i] / chain.pi[j]) * chain.k(i, j);

    RngStream rng(31337, 0);
    std::vector<double> v(N), w(N);
    for (double& x : v) x = rng.next_double() - 0.5;
    double rayleigh = 0.0;
    for (int t = 0; t < iters; ++t) {
        double dot = 0.0;
        for (int i = 0; i < N; ++i) dot += u1[i] * v[i];
        for (int i = 0; i < N; ++i) v[i] -= dot * u1[i];
        for (int i = 0; i < N; ++i) {
            double acc = v[i];  // the +I part
            const double* row = &s[static_cast<std::size_t>(i) * N];
            for (int j = 0; j < N; ++j) acc += row[j] * v[j];
            w[i] = acc;
        }
        double nrm = 0.0, num = 0.0;
        for (int i = 0; i < N; ++i) {
            num += v[i] * w[i];
            nrm += w[i] * w[i];
        }
        double vv = 0.0;
        for (int i = 0; i < N; ++i) vv += v[i] * v[i];
        rayleigh = num / vv - 1.0;
        nrm = std::sqrt(nrm);
        for (int i = 0; i < N; ++i) v[i] = w[i] / nrm;
    }
    return rayleigh;
}

// Brute-force conductance: recompute every cut from scratch.
double conductance_bruteforce(const DiscreteChain& chain) {
    const int N = chain.states;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask + 1 < (1u << N); ++mask) {
        double flow = 0.0, pi_a = 0.0;
        for (int i = 0; i < N; ++i) {
            if (!(mask & (1u << i))) continue;
            pi_a += chain.pi[i];
            for (int j = 0; j < N; ++j)
                if (!(mask & (1u << j))) flow += chain.pi[i] * chain.k(i, j);
        }
        best = std::min(best, flow / std::min(pi_a, 1.0 - pi_a));
    }
    return best;
}

}  // namespace

TEST_CASE("finite-volume discretization of the 1-D metropolis walk") {
    SECTION("flat density, two cells") {
        const WeightOracle flat = spectral_test_density("exp-linear", 0.0);
        for (double delta : {1.0, 2.0}) {
            // overlap of B(-0.5, delta) with [0,1] is min(delta - 0.5, 1), so
            // the off-diagonal mass is overlap/(2 delta): 1/4 in both cases
            const DiscreteChain c = discretize_1d(flat, delta, 2);
            const double q = std::min(delta - 0.5, 1.0) / (2.0 * delta);
            CHECK(q == 0.25);
            CHECK(c.k(0, 1) == Catch::Approx(q).epsilon(1e-14));
            CHECK(c.k(0, 0) == Catch::Approx(1.0 - q).epsilon(1e-14));
            CHECK(second_eigenvalue(c) == Catch::Approx(1.0 - 2.0 * q).margin(1e-12));
        }
        const DiscreteChain c = discretize_1d(flat, 1.0, 2);
        CHECK(c.pi[0] == Catch::Approx(0.5));
    }

    SECTION("every constructed chain is a reversible stochastic matrix") {
        for (double alpha : {0.0, 1.0, 4.0})
            for (double delta : {0.25, 0.5, 1.5})
                for (int N : {2, 3, 8, 16})
                    for (const char* id : {"exp-linear", "exp-abs"}) {
                        const DiscreteChain c =
                            discretize_1d(spectral_test_density(id, alpha), delta, N);
                        CHECK(row_sum_defect(c) <= 1e-12);
                        CHECK(reversibility_defect(c) <= 1e-12);
                        for (double v : c.kernel) REQUIRE(v >= -1e-15);
                    }
    }

    SECTION("argument validation") {
        const WeightOracle flat = spectral_test_density("exp-linear", 0.0);
        CHECK_THROWS_AS(discretize_1d(flat, 0.5, 1), std::invalid_argument);
        CHECK_THROWS_AS(discretize_1d(flat, 0.0, 4), std::invalid_argument);
    }
}

TEST_CASE("second eigenvalue") {
    CHECK(second_eigenvalue(two_state(0.3)) == Catch::Approx(0.4).margin(1e-12));
    CHECK(second_eigenvalue(rank_one({0.1, 0.2, 0.3, 0.4})) ==
          Catch::Approx(0.0).margin(1e-12));
    // beta may be negative; the gap then exceeds 1 and Cheeger still holds
    CHECK(second_eigenvalue(two_state(0.9)) == Catch::Approx(-0.8).margin(1e-12));
    CHECK(check_cheeger(two_state(0.9)).cheeger_ok);

    const DiscreteChain c = discretize_1d(spectral_test_density("exp-linear", 2.0), 0.5, 16);
    const double beta = second_eigenvalue(c);
    CHECK(beta == Catch::Approx(power_iteration_beta(c, 20000)).margin(1e-8));

    SECTION("slow direction is centered and normalized") {
        const std::vector<double> f = second_eigen_direction(c);
        double mean = 0.0, sq = 0.0;
        for (int i = 0; i < c.states; ++i) {
            mean += c.pi[i] * f[i];
            sq += c.pi[i] * f[i] * f[i];
        }
        CHECK(std::abs(mean) <= 1e-12);
        CHECK(sq == Catch::Approx(1.0).epsilon(1e-12));
        // and it is an eigenvector: K f = beta f
        for (int i = 0; i < c.states; ++i) {
            double kf = 0.0;
            for (int j = 0; j < c.states; ++j) kf += c.k(i, j) * f[j];
            CHECK(kf == Catch::Approx(beta * f[i]).margin(1e-10));
        }
    }
}

TEST_CASE("conductance") {
    SECTION("two-state chain") {
        CHECK(conductance_exact(two_state(0.3)) == Catch::Approx(0.3).epsilon(1e-14));
    }

    SECTION("rank-one kernel with uniform weights") {
        CHECK(conductance_exact(rank_one({0.25, 0.25, 0.25, 0.25})) ==
              Catch::Approx(0.5).epsilon(1e-14));
    }

    SECTION("gray-code enumeration agrees with brute force") {
        for (double alpha : {0.0, 2.0})
            for (int N : {3, 5, 8}) {
                const DiscreteChain c =
                    discretize_1d(spectral_test_density("exp-abs", alpha), 0.4, N);
                CHECK(conductance_exact(c) ==
                      Catch::Approx(conductance_bruteforce(c)).epsilon(1e-12));
            }
    }

    SECTION("contiguous mode upper-bounds the exhaustive value") {
        for (double alpha : {0.0, 1.0, 3.0}) {
            const DiscreteChain c =
                discretize_1d(spectral_test_density("exp-linear", alpha), 0.3, 12);
            CHECK(conductance_contiguous(c) >= conductance_exact(c) - 1e-13);
        }
        // for these birth-death-like chains the minimizing cut is an interval
        const DiscreteChain c = discretize_1d(spectral_test_density("exp-linear", 2.0), 0.3, 10);
        CHECK(conductance_contiguous(c) == Catch::Approx(conductance_exact(c)).epsilon(1e-12));
    }

    SECTION("size limit") {
        DiscreteChain big = rank_one(std::vector<double>(21, 1.0 / 21.0));
        CHECK_THROWS_AS(conductance_exact(big), std::invalid_argument);
        CHECK(conductance_contiguous(big) > 0.0);
    }
}

TEST_CASE("local conductance estimates") {
    RngStream rng(12, 0);

    SECTION("interior points never reject") {
        const ConvexBody ball = ConvexBody::unit_ball(3);
        const auto est = local_conductance_mc(ball, {0.1, 0.0, 0.2}, 0.4, 20000, rng);
        CHECK(est.estimate == 1.0);
        CHECK(est.sigma == 0.0);
    }

    SECTION("boundary point in 2-D matches the lens ratio") {
        const ConvexBody disc = ConvexBody::unit_ball(2);
        const double delta = 1.0 / std::sqrt(3.0);
        const auto est = local_conductance_mc(disc, {0.0, 1.0}, delta, 1000000, rng);
        const double lens = delta * delta * std::acos(delta / 2.0) +
                            std::acos(1.0 - delta * delta / 2.0) -
                            0.5 * delta * std::sqrt(4.0 - delta * delta);
        const double l_exact = lens / (std::numbers::pi * delta * delta);
        CHECK(std::abs(est.estimate - l_exact) <= 3.0 * est.sigma);
    }

    SECTION("the 0.3 floor holds at tuned widths") {
        for (int d : {2, 6, 10}) {
            const ConvexBody ball = ConvexBody::unit_ball(d);
            Point x(d, 0.0);
            x[0] = 1.0;
            const auto est =
                local_conductance_mc(ball, x, 1.0 / std::sqrt(d + 1.0), 100000, rng);
            CHECK(est.estimate - 3.0 * est.sigma >= 0.3);
        }
    }
}

TEST_CASE("cheeger inequality on the discrete laboratory") {
    SECTION("two-state chain") {
        const SpectralReport r = check_cheeger(two_state(0.3));
        CHECK(r.lambda == Catch::Approx(0.6).margin(1e-12));
        CHECK(r.conductance == Catch::Approx(0.3).margin(1e-12));
        CHECK(r.cheeger_ok);
    }

    SECTION("discretized metropolis chain") {
        const DiscreteChain c = discretize_1d(spectral_test_density("exp-linear", 2.0), 0.5, 12);
        const SpectralReport r = check_cheeger(c);
        CHECK(r.cheeger_ok);
        CHECK(r.lambda >= r.conductance * r.conductance / 2.0);
    }

    SECTION("rank-one kernel") {
        const SpectralReport r = check_cheeger(rank_one({0.25, 0.25, 0.25, 0.25}));
        CHECK(r.lambda == Catch::Approx(1.0).margin(1e-12));
        CHECK(r.cheeger_ok);
    }
}

TEST_CASE("asymptotic error law") {
    SECTION("independent sampling gives e^2 n = 1") {
        const auto pts = asymptotic_error_law(rank_one({0.5, 0.5}), {1.0, -1.0},
                                              {1000, 10000}, 4000, 99);
        CHECK(pts.back().e2n == Catch::Approx(1.0).epsilon(0.10));
    }

    SECTION("two-state chain approaches (1+beta)/(1-beta)") {
        const auto pts = asymptotic_error_law(two_state(0.25), {1.0, -1.0}, {10000},
                                              2000, 7);
        CHECK(pts[0].e2n == Catch::Approx(3.0).epsilon(0.10));
    }

    SECTION("the limit grows with beta") {
        double prev = 0.0;
        for (double p : {0.4, 0.25, 0.1}) {
            const auto pts =
                asymptotic_error_law(two_state(p), {1.0, -1.0}, {20000}, 1500, 11);
            CHECK(pts[0].e2n > prev);
            prev = pts[0].e2n;
        }
    }

    SECTION("schedules must increase") {
        CHECK_THROWS_AS(
            asymptotic_error_law(two_state(0.25), {1.0, -1.0}, {100, 100}, 10, 1),
            std::invalid_argument);
    }

    SECTION("the e^2 n trajectory stays below the analytic ceiling") {
        // discrete analogue of the asymptotic bound at d = 1 (heuristic check:
        // the ceiling is extremely loose, the trajectory must sit far under it)
        for (double alpha : {0.0, 2.0}) {
            const double delta = 0.5;
            const DiscreteChain c =
                discretize_1d(spectral_test_density("exp-linear", alpha), delta, 8);
            const std::vector<double> f = second_eigen_direction(c);
            const double ceiling = error_const_metropolis(1, delta, alpha);
            for (const auto& pt :
                 asymptotic_error_law(c, f, {100, 1000, 10000}, 400, 3)) {
                CHECK(pt.e2n <= ceiling);
                CHECK(pt.e2n > 0.0);
            }
        }
    }
}

TEST_CASE("discrete analogues of the conductance bounds") {
    SECTION("metropolis conductance dominates the analytic floor") {
        for (const SpectralCase& c :
             spectral_suite({0.0, 1.0, 2.0, 4.0}, {0.25, 0.5}, {8, 16})) {
            INFO(c.rho_id << " alpha=" << c.alpha << " delta=" << c.delta
                          << " N=" << c.states);
            CHECK(c.reversibility_defect <= 1e-12);
            CHECK(c.report.cheeger_ok);
            CHECK(c.report.conductance >= c.met_cond_reference);
        }
    }

    SECTION("ball-walk gap dominates the cheeger square of the analytic bound") {
        for (double delta : {0.25, 0.5})
            for (int N : {8, 16}) {
                const DiscreteChain c =
                    discretize_1d(spectral_test_density("exp-linear", 0.0), delta, N);
                double floor = 1.0;
                for (int i = 0; i < N; ++i) floor = std::min(floor, 1.0 - c.k(i, i));
                const double phi_bound = std::sqrt(std::numbers::pi / 2.0) * floor * floor *
                                         delta / (8.0 * 2.0 * std::sqrt(2.0));
                const double lambda = 1.0 - second_eigenvalue(c);
                CHECK(lambda >= phi_bound * phi_bound / 2.0);
            }
    }
}
