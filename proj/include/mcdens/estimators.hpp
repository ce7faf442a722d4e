#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mcdens/bounds.hpp"
#include "mcdens/chains.hpp"
#include "mcdens/instances.hpp"

namespace mcdens {

/// Simple Monte Carlo: i.i.d. uniform nodes, quotient of the sample means of
/// f*rho and rho. Costs exactly n f-evaluations and n rho-evaluations.
inline double estimate_simple(const ProblemInstance& instance, std::int64_t n,
                              RngStream& rng, ChainBudget& budget) {
    if (n < 1) throw std::invalid_argument("estimate_simple: n >= 1");
    double num = 0.0, den = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
        const Point x = instance.body.sample_uniform(rng, budget);
        const double w = instance.rho(x, budget);
        num += instance.f(x, budget) * w;
        den += w;
    }
    return num / den;
}

inline double estimate_simple(const ProblemInstance& instance, std::int64_t n,
                              RngStream& rng) {
    ChainBudget scratch;
    return estimate_simple(instance, n, rng, scratch);
}

/// Metropolis estimator: time average of f over n steps of the ball-walk
/// Metropolis chain started at the body's center (burn-in: one plain ball-walk
/// step). Identical trajectory to run_chain with the Metropolis stepper.
inline double estimate_mh(const ProblemInstance& instance, std::int64_t n, double delta,
                          RngStream& rng, ChainBudget& budget) {
    double total = 0.0;
    walk_chain(instance.body.center(), n, StepperKind::Metropolis, delta, instance.body,
               &instance.rho, rng, budget,
               [&](const Point& x) { total += instance.f(x, budget); });
    return total / static_cast<double>(n);
}

inline double estimate_mh(const ProblemInstance& instance, std::int64_t n, double delta,
                          RngStream& rng) {
    ChainBudget scratch;
    return estimate_mh(instance, n, delta, rng, scratch);
}

/// Which estimator to replicate; delta empty means the tuned width delta*.
struct EstimatorSpec {
    enum class Kind { Simple, Metropolis } kind = Kind::Simple;
    std::optional<double> delta;

    static EstimatorSpec simple() { return {Kind::Simple, std::nullopt}; }
    static EstimatorSpec metropolis(std::optional<double> delta = std::nullopt) {
        return {Kind::Metropolis, delta};
    }

    std::string id() const { return kind == Kind::Simple ? "simple" : "metropolis"; }

    double resolve_delta(const ProblemInstance& instance) const {
        if (delta) return *delta;
        const double alpha =
            instance.rho.class_tag == WeightClass::LogConcaveLipschitz ? instance.rho.alpha : 0.0;
        return delta_star(instance.body.dim(), alpha);
    }
};

struct EstimateReport {
    std::string estimator_id;
    std::int64_t n = 0;
    int replications = 0;
    std::vector<double> values;
    double rmse = 0.0;
    double truth = 0.0;
    ChainBudget budget_totals;
    std::optional<double> delta_used;
};

namespace detail {

/// Runs fn(r) for r in [0, count) across workers; results land in submission
/// order, so reductions are deterministic regardless of thread count.
template <class Fn>
void parallel_for_index(int count, Fn&& fn) {
    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(count));
    if (workers <= 1) {
        for (int r = 0; r < count; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&fn, w, workers, count] {
            for (int r = static_cast<int>(w); r < count; r += static_cast<int>(workers)) fn(r);
        });
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Replicates an estimator with independent streams (stream_id = stream_base + r)
/// and reports the empirical root-mean-square error against the instance truth.
inline EstimateReport measure_rmse(const ProblemInstance& instance,
                                   const EstimatorSpec& spec, std::int64_t n,
                                   int replications, std::uint64_t seed,
                                   std::uint64_t stream_base = 0) {
    if (!instance.truth)
        throw std::invalid_argument("measure_rmse: instance carries no reference value");
    if (replications < 2) throw std::invalid_argument("measure_rmse: replications >= 2");

    EstimateReport report;
    report.estimator_id = spec.id();
    report.n = n;
    report.replications = replications;
    report.truth = *instance.truth;
    report.values.resize(replications);
    if (spec.kind == EstimatorSpec::Kind::Metropolis)
        report.delta_used = spec.resolve_delta(instance);

    std::vector<ChainBudget> budgets(replications);
    detail::parallel_for_index(replications, [&](int r) {
        RngStream rng(seed, stream_base + static_cast<std::uint64_t>(r));
        if (spec.kind == EstimatorSpec::Kind::Simple)
            report.values[r] = estimate_simple(instance, n, rng, budgets[r]);
        else
            report.values[r] = estimate_mh(instance, n, *report.delta_used, rng, budgets[r]);
    });

    double sq = 0.0;
    for (int r = 0; r < replications; ++r) {
        const double err = report.values[r] - report.truth;
        sq += err * err;
        report.budget_totals += budgets[r];
    }
    report.rmse = std::sqrt(sq / replications);
    return report;
}

struct WorstCaseResult {
    double worst_rmse = 0.0;
    int worst_index = -1;
    std::vector<EstimateReport> reports;
};

/// Max RMSE over a finite family; instance k's replications use
/// stream ids k*replications ... k*replications + replications - 1.
inline WorstCaseResult worst_case_over_family(const std::vector<ProblemInstance>& family,
                                              const EstimatorSpec& spec, std::int64_t n,
                                              int replications, std::uint64_t seed) {
    if (family.empty()) throw std::invalid_argument("worst_case_over_family: empty family");
    WorstCaseResult result;
    result.reports.reserve(family.size());
    for (std::size_t k = 0; k < family.size(); ++k) {
        result.reports.push_back(
            measure_rmse(family[k], spec, n, replications, seed,
                         static_cast<std::uint64_t>(k) * replications));
        if (result.reports.back().rmse > result.worst_rmse) {
            result.worst_rmse = result.reports.back().rmse;
            result.worst_index = static_cast<int>(k);
        }
    }
    return result;
}

}  // namespace mcdens
