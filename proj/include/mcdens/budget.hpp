#pragma once

#include <cstdint>

namespace mcdens {

/// Oracle-cost counters for one worker. Counters only ever increase during a
/// run; replicated workers keep their own budget and merge at the join.
struct ChainBudget {
    std::uint64_t f_evals = 0;
    std::uint64_t rho_evals = 0;
    std::uint64_t membership_calls = 0;
    std::uint64_t rng_draws = 0;

    ChainBudget& operator+=(const ChainBudget& other) {
        f_evals += other.f_evals;
        rho_evals += other.rho_evals;
        membership_calls += other.membership_calls;
        rng_draws += other.rng_draws;
        return *this;
    }
};

}  // namespace mcdens
