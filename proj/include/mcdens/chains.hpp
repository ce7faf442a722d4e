#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mcdens/budget.hpp"
#include "mcdens/geometry.hpp"
#include "mcdens/instances.hpp"
#include "mcdens/rng.hpp"

namespace mcdens {

/// Current chain position with the density value cached so that holding in
/// place never costs an extra rho evaluation.
struct ChainState {
    Point position;
    double cached_rho = 0.0;
    std::int64_t step_index = 0;
};

namespace detail {

/// Uniform proposal in B(x, delta); one logical draw block of d+1 draws.
inline void propose_in_ball(const Point& x, double delta, RngStream& rng,
                            ChainBudget& budget, Point& out) {
    const std::size_t d = x.size();
    out.resize(d);
    ConvexBody::gaussian_direction(rng, out);
    const double radius =
        delta * std::pow(rng.next_double(), 1.0 / static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) out[i] = x[i] + radius * out[i];
    budget.rng_draws += static_cast<std::uint64_t>(d) + 1;
}

}  // namespace detail

/// One lazy ball-walk step: propose uniformly in B(x, delta), move if the
/// proposal stays in the body, hold otherwise. Exactly one membership call.
inline Point ball_walk_step(const Point& x, double delta, const ConvexBody& body,
                            RngStream& rng, ChainBudget& budget) {
    if (!body.contains(x)) throw std::invalid_argument("ball_walk_step: x outside body");
    if (!(delta > 0.0)) throw std::invalid_argument("ball_walk_step: delta > 0");
    Point y;
    detail::propose_in_ball(x, delta, rng, budget, y);
    if (membership(body, y, budget)) return y;
    return x;
}

/// One Metropolis step on top of the lazy ball walk. The acceptance draw is
/// consumed only when rho(y) < rho(x); boundary rejections never touch rho.
inline void metropolis_step(ChainState& state, double delta, const ConvexBody& body,
                            const WeightOracle& rho, RngStream& rng,
                            ChainBudget& budget) {
    Point y;
    detail::propose_in_ball(state.position, delta, rng, budget, y);
    ++state.step_index;
    if (!membership(body, y, budget)) return;
    const double rho_y = rho(y, budget);
    bool accept = rho_y >= state.cached_rho;
    if (!accept) {
        ++budget.rng_draws;
        accept = rho_y >= rng.next_double() * state.cached_rho;
    }
    if (accept) {
        state.position = std::move(y);
        state.cached_rho = rho_y;
    }
}

/// Stateless convenience wrapper; evaluates rho(x) itself, so prefer the
/// ChainState overload inside loops.
inline Point metropolis_step(const Point& x, double delta, const ConvexBody& body,
                             const WeightOracle& rho, RngStream& rng,
                             ChainBudget& budget) {
    if (!body.contains(x)) throw std::invalid_argument("metropolis_step: x outside body");
    if (!(delta > 0.0)) throw std::invalid_argument("metropolis_step: delta > 0");
    ChainState state{x, rho(x, budget), 0};
    metropolis_step(state, delta, body, rho, rng, budget);
    return state.position;
}

enum class StepperKind { Ball, Metropolis };

/// Walks `steps` states X_1..X_n and hands each to `visit`. X_1 is one step of
/// the plain ball walk from `start` (burn-in convention); from there the
/// selected stepper takes over. Metropolis evaluates rho lazily on first
/// arrival at a point.
template <class Visitor>
void walk_chain(const Point& start, std::int64_t steps, StepperKind kind, double delta,
                const ConvexBody& body, const WeightOracle* rho, RngStream& rng,
                ChainBudget& budget, Visitor&& visit) {
    if (steps < 1) throw std::invalid_argument("walk_chain: steps >= 1");
    if (!body.contains(start)) throw std::invalid_argument("walk_chain: start outside body");
    if (!(delta > 0.0)) throw std::invalid_argument("walk_chain: delta > 0");
    if (kind == StepperKind::Metropolis && rho == nullptr)
        throw std::invalid_argument("walk_chain: metropolis needs a weight oracle");

    ChainState state;
    state.position = ball_walk_step(start, delta, body, rng, budget);
    state.step_index = 1;
    if (kind == StepperKind::Metropolis) state.cached_rho = (*rho)(state.position, budget);
    visit(static_cast<const Point&>(state.position));

    for (std::int64_t i = 1; i < steps; ++i) {
        if (kind == StepperKind::Metropolis) {
            metropolis_step(state, delta, body, *rho, rng, budget);
        } else {
            Point y;
            detail::propose_in_ball(state.position, delta, rng, budget, y);
            ++state.step_index;
            if (membership(body, y, budget)) state.position = std::move(y);
        }
        visit(static_cast<const Point&>(state.position));
    }
}

/// Trajectory (X_1, ..., X_n) plus the oracle budget it consumed.
struct ChainRun {
    std::vector<Point> trajectory;
    ChainBudget budget;
};

inline ChainRun run_chain(const Point& start, std::int64_t steps, StepperKind kind,
                          double delta, const ConvexBody& body, const WeightOracle* rho,
                          RngStream& rng) {
    ChainRun run;
    run.trajectory.reserve(static_cast<std::size_t>(steps));
    walk_chain(start, steps, kind, delta, body, rho, rng, run.budget,
               [&run](const Point& x) { run.trajectory.push_back(x); });
    return run;
}

}  // namespace mcdens
