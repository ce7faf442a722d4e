#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcdens/bounds.hpp"
#include "mcdens/estimators.hpp"
#include "mcdens/instances.hpp"
#include "mcdens/spectral.hpp"

namespace mcdens {

// ---------------------------------------------------------------------------
// Ratio-bounded hard family: prior-averaged error of simple Monte Carlo
// against the analytic sandwich.
// ---------------------------------------------------------------------------

struct FcBenchRow {
    double C = 0.0;
    std::int64_t n = 0;
    double empirical_rmse = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    bool inside_sandwich = false;
};

/// RMSE of simple MC averaged jointly over prior draws and estimator
/// randomness (draw k samples the prior with stream (1<<32)+k, its
/// replications use streams k*reps .. k*reps+reps-1).
inline double fc_prior_averaged_rmse(std::int64_t n, double C, int prior_draws,
                                     int replications, std::uint64_t seed) {
    std::vector<double> per_draw(prior_draws, 0.0);
    detail::parallel_for_index(prior_draws, [&](int k) {
        RngStream prior_rng(seed, (1ull << 32) + static_cast<std::uint64_t>(k));
        const FcHardInstance inst = sample_fc_prior(static_cast<int>(n), C, prior_rng);
        const double truth = *inst.truth;
        double sq = 0.0;
        for (int r = 0; r < replications; ++r) {
            RngStream rng(seed, static_cast<std::uint64_t>(k) * replications + r);
            ChainBudget budget;
            const double err = estimate_simple(inst, n, rng, budget) - truth;
            sq += err * err;
        }
        per_draw[k] = sq / replications;
    });
    double total = 0.0;
    for (double v : per_draw) total += v;
    return std::sqrt(total / prior_draws);
}

inline std::vector<FcBenchRow> bench_fc(const std::vector<double>& Cs,
                                        const std::vector<std::int64_t>& ns,
                                        int prior_draws, int replications,
                                        std::uint64_t seed) {
    std::vector<FcBenchRow> rows;
    for (double C : Cs)
        for (std::int64_t n : ns) {
            FcBenchRow row;
            row.C = C;
            row.n = n;
            row.empirical_rmse = fc_prior_averaged_rmse(n, C, prior_draws, replications, seed);
            row.lower_bound = lower_bound_fc(n, C);
            row.upper_bound = upper_bound_simple(n, C);
            row.inside_sandwich =
                row.lower_bound <= row.empirical_rmse && row.empirical_rmse <= row.upper_bound;
            rows.push_back(row);
        }
    return rows;
}

// ---------------------------------------------------------------------------
// Log-concave hard family on the ball: worst-case error of the non-adaptive
// estimator vs the tuned Metropolis chain at equal sample count.
// ---------------------------------------------------------------------------

struct GapRow {
    std::string estimator;
    int center_index = 0;
    int sign = 0;
    std::int64_t n = 0;
    double rmse = 0.0;
};

struct GapResult {
    std::vector<GapRow> rows;
    double worst_simple = 0.0;
    double worst_metropolis = 0.0;
    double ratio = 0.0;  // worst_simple / worst_metropolis
    double delta = 0.0;
    double lower_bound_nonadaptive_value = 0.0;
    Packing packing;
};

inline GapResult bench_gap(int d, double alpha, int m, std::int64_t n, int replications,
                           std::uint64_t seed, std::optional<double> delta_override = {}) {
    GapResult result;
    result.packing = packing_on_ball(m, d);
    result.delta = delta_override.value_or(delta_star(d, alpha));
    const std::vector<ProblemInstance> family = make_fad_family(d, alpha, result.packing);

    const WorstCaseResult simple =
        worst_case_over_family(family, EstimatorSpec::simple(), n, replications, seed);
    const WorstCaseResult mh = worst_case_over_family(
        family, EstimatorSpec::metropolis(result.delta), n, replications, seed + 1);

    for (std::size_t k = 0; k < family.size(); ++k) {
        const int center = static_cast<int>(k) / 2;
        const int sign = (k % 2 == 0) ? +1 : -1;
        result.rows.push_back({"simple", center, sign, n, simple.reports[k].rmse});
        result.rows.push_back({"metropolis", center, sign, n, mh.reports[k].rmse});
    }
    result.worst_simple = simple.worst_rmse;
    result.worst_metropolis = mh.worst_rmse;
    result.ratio = result.worst_simple / result.worst_metropolis;
    result.lower_bound_nonadaptive_value = lower_bound_nonadaptive(n, d, alpha, 1.0);
    return result;
}

// ---------------------------------------------------------------------------
// Discrete spectral laboratory.
// ---------------------------------------------------------------------------

struct SpectralCase {
    std::string rho_id;
    double alpha = 0.0;
    double delta = 0.0;
    int states = 0;
    double reversibility_defect = 0.0;
    double local_floor = 0.0;       // min_i (1 - K_ii) of the constant-rho chain
    double met_cond_reference = 0.0;  // analytic conductance lower bound at that floor
    SpectralReport report;
};

/// Log-linear and log-|x| densities on [-1,1] with Lipschitz constant alpha.
inline WeightOracle spectral_test_density(const std::string& rho_id, double alpha) {
    if (rho_id == "exp-linear")
        return WeightOracle{[alpha](const Point& x) { return std::exp(-alpha * x[0]); },
                            WeightClass::LogConcaveLipschitz, std::exp(2.0 * alpha), alpha};
    if (rho_id == "exp-abs")
        return WeightOracle{
            [alpha](const Point& x) { return std::exp(-alpha * std::abs(x[0])); },
            WeightClass::LogConcaveLipschitz, std::exp(alpha), alpha};
    throw std::invalid_argument("spectral_test_density: unknown id '" + rho_id + "'");
}

inline SpectralCase run_spectral_case(const std::string& rho_id, double alpha, double delta,
                                      int N) {
    SpectralCase c;
    c.rho_id = rho_id;
    c.alpha = alpha;
    c.delta = delta;
    c.states = N;
    const DiscreteChain chain = discretize_1d(spectral_test_density(rho_id, alpha), delta, N);
    c.reversibility_defect = reversibility_defect(chain);
    c.report = check_cheeger(chain);

    const DiscreteChain reference =
        discretize_1d(spectral_test_density("exp-linear", 0.0), delta, N);
    double floor = 1.0;
    for (int i = 0; i < N; ++i) floor = std::min(floor, 1.0 - reference.k(i, i));
    c.local_floor = floor;
    c.met_cond_reference = conductance_lb_metropolis(floor, delta, 2.0, 1, alpha);
    return c;
}

inline std::vector<SpectralCase> spectral_suite(const std::vector<double>& alphas,
                                                const std::vector<double>& deltas,
                                                const std::vector<int>& Ns) {
    std::vector<SpectralCase> cases;
    for (double alpha : alphas)
        for (double delta : deltas)
            for (int N : Ns)
                for (const char* id : {"exp-linear", "exp-abs"})
                    cases.push_back(run_spectral_case(id, alpha, delta, N));
    return cases;
}

}  // namespace mcdens
