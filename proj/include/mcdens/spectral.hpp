#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mcdens/chains.hpp"
#include "mcdens/estimators.hpp"
#include "mcdens/instances.hpp"

namespace mcdens {

/// Finite reversible chain: row-stochastic kernel plus invariant distribution.
struct DiscreteChain {
    int states = 0;
    std::vector<double> kernel;  // row-major states x states
    std::vector<double> pi;

    double k(int i, int j) const { return kernel[static_cast<std::size_t>(i) * states + j]; }
    double& k(int i, int j) { return kernel[static_cast<std::size_t>(i) * states + j]; }
};

struct SpectralReport {
    double beta = 0.0;         // second largest eigenvalue
    double lambda = 0.0;       // spectral gap 1 - beta
    double conductance = 0.0;  // phi
    bool cheeger_ok = false;
    bool conductance_exhaustive = true;
};

/// Largest deviation from detailed balance, max_ij |pi_i K_ij - pi_j K_ji|.
inline double reversibility_defect(const DiscreteChain& chain) {
    double worst = 0.0;
    for (int i = 0; i < chain.states; ++i)
        for (int j = i + 1; j < chain.states; ++j)
            worst = std::max(worst,
                             std::abs(chain.pi[i] * chain.k(i, j) - chain.pi[j] * chain.k(j, i)));
    return worst;
}

inline double row_sum_defect(const DiscreteChain& chain) {
    double worst = 0.0;
    for (int i = 0; i < chain.states; ++i) {
        double s = 0.0;
        for (int j = 0; j < chain.states; ++j) s += chain.k(i, j);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

/// Finite-volume Metropolis ball walk on [-1,1] over N equal cells: off-diagonal
/// entries are the exact interval overlap of B(mid_i, delta) with cell j times
/// min{1, rho_j/rho_i}/(2 delta) at cell-midpoint density values; the diagonal
/// absorbs the rest, and pi is proportional to the midpoint density.
inline DiscreteChain discretize_1d(const WeightOracle& rho, double delta, int N) {
    if (N < 2) throw std::invalid_argument("discretize_1d: N >= 2");
    if (!(delta > 0.0)) throw std::invalid_argument("discretize_1d: delta > 0");
    const double h = 2.0 / N;

    std::vector<double> mid(N), w(N);
    for (int i = 0; i < N; ++i) {
        mid[i] = -1.0 + (i + 0.5) * h;
        w[i] = rho.evaluate(Point{mid[i]});
        if (!(w[i] > 0.0)) throw std::domain_error("discretize_1d: density must be positive");
    }

    DiscreteChain chain;
    chain.states = N;
    chain.kernel.assign(static_cast<std::size_t>(N) * N, 0.0);
    chain.pi.resize(N);

    double wsum = 0.0;
    for (double v : w) wsum += v;
    for (int i = 0; i < N; ++i) chain.pi[i] = w[i] / wsum;

    for (int i = 0; i < N; ++i) {
        double off = 0.0;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            const double lo = std::max(mid[i] - delta, -1.0 + j * h);
            const double hi = std::min(mid[i] + delta, -1.0 + (j + 1) * h);
            const double overlap = std::max(0.0, hi - lo);
            if (overlap == 0.0) continue;
            const double accept = std::min(1.0, w[j] / w[i]);
            chain.k(i, j) = overlap * accept / (2.0 * delta);
            off += chain.k(i, j);
        }
        chain.k(i, i) = 1.0 - off;
    }

    if (reversibility_defect(chain) > 1e-9)
        throw std::runtime_error("discretize_1d: reversibility defect above 1e-9");
    return chain;
}

namespace detail {

inline Eigen::MatrixXd symmetrized(const DiscreteChain& chain) {
    const int N = chain.states;
    Eigen::MatrixXd S(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            S(i, j) = std::sqrt(chain.pi[i] / chain.pi[j]) * chain.k(i, j);
    // exact symmetry for the eigensolver
    return 0.5 * (S + S.transpose());
}

}  // namespace detail

/// Second largest eigenvalue of the reversible kernel, via the symmetrized
/// matrix D^{1/2} K D^{-1/2}.
inline double second_eigenvalue(const DiscreteChain& chain) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(detail::symmetrized(chain),
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("second_eigenvalue: eigensolver failed");
    return solver.eigenvalues()(chain.states - 2);
}

/// The slowest non-constant direction: eigenvector f of the second eigenvalue,
/// normalized so that sum pi f = 0 and sum pi f^2 = 1.
inline std::vector<double> second_eigen_direction(const DiscreteChain& chain) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(detail::symmetrized(chain));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("second_eigen_direction: eigensolver failed");
    const int N = chain.states;
    Eigen::VectorXd v = solver.eigenvectors().col(N - 2);
    std::vector<double> f(N);
    double mean = 0.0, second = 0.0;
    for (int i = 0; i < N; ++i) {
        f[i] = v(i) / std::sqrt(chain.pi[i]);
        mean += chain.pi[i] * f[i];
    }
    for (int i = 0; i < N; ++i) {
        f[i] -= mean;
        second += chain.pi[i] * f[i] * f[i];
    }
    const double scale = 1.0 / std::sqrt(second);
    for (double& x : f) x *= scale;
    return f;
}

namespace detail {

inline double cut_ratio(double flow, double pi_a) {
    return flow / std::min(pi_a, 1.0 - pi_a);
}

}  // namespace detail

/// Exact conductance by exhaustive enumeration of all 2^{N-1}-1 cuts (Gray
/// code with an O(N) flow update per subset; complements are equivalent, so
/// state 0 stays inside A). Limited to N <= 20.
inline double conductance_exact(const DiscreteChain& chain) {
    const int N = chain.states;
    if (N > 20) throw std::invalid_argument("conductance_exact: N > 20, use contiguous mode");
    // symmetric edge weights pi_i K_ij (reversibility)
    std::vector<double> w(static_cast<std::size_t>(N) * N, 0.0);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (j != i) w[static_cast<std::size_t>(i) * N + j] = chain.pi[i] * chain.k(i, j);

    std::vector<bool> in(N, false);
    in[0] = true;
    int included = 1;
    double flow = 0.0;  // flow(A, A^c) for A = {0}
    for (int j = 1; j < N; ++j) flow += w[j];
    double pi_a = chain.pi[0];
    double best = detail::cut_ratio(flow, pi_a);

    const std::uint32_t total = 1u << (N - 1);
    std::uint32_t gray = 0;
    for (std::uint32_t t = 1; t < total; ++t) {
        const std::uint32_t next = t ^ (t >> 1);
        const int s = std::countr_zero(gray ^ next) + 1;  // state flipped this step
        gray = next;
        const bool entering = !in[s];
        in[s] = entering;
        included += entering ? 1 : -1;
        double delta_flow = 0.0;
        const double* ws = &w[static_cast<std::size_t>(s) * N];
        for (int j = 0; j < N; ++j) {
            if (j == s) continue;
            // edge (s,j) crosses the cut iff exactly one endpoint is in A
            delta_flow += (in[j] == entering) ? -ws[j] : +ws[j];
        }
        flow += delta_flow;
        pi_a += entering ? chain.pi[s] : -chain.pi[s];
        if (included < N)  // exclude A = whole space
            best = std::min(best, detail::cut_ratio(flow, pi_a));
    }
    return best;
}

/// Upper-bound surrogate for larger chains: the infimum restricted to
/// contiguous state intervals [i..j].
inline double conductance_contiguous(const DiscreteChain& chain) {
    const int N = chain.states;
    std::vector<double> w(static_cast<std::size_t>(N) * N, 0.0);
    std::vector<double> row(N, 0.0);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (j != i) {
                w[static_cast<std::size_t>(i) * N + j] = chain.pi[i] * chain.k(i, j);
                row[i] += w[static_cast<std::size_t>(i) * N + j];
            }

    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
        double flow = 0.0, pi_a = 0.0;
        for (int j = i; j < N; ++j) {
            // extend [i..j-1] by j: edges j->outside appear, edges inside->j vanish
            double inside = 0.0;
            for (int a = i; a < j; ++a) inside += w[static_cast<std::size_t>(j) * N + a];
            flow += row[j] - 2.0 * inside;
            pi_a += chain.pi[j];
            if (i == 0 && j == N - 1) continue;  // full set
            best = std::min(best, detail::cut_ratio(flow, pi_a));
        }
    }
    return best;
}

struct LocalConductanceEstimate {
    double estimate = 0.0;
    double sigma = 0.0;  // binomial standard error
};

/// Monte Carlo local conductance of the ball walk at x: fraction of uniform
/// B(x, delta) proposals that stay inside the body.
inline LocalConductanceEstimate local_conductance_mc(const ConvexBody& body, const Point& x,
                                                     double delta, std::int64_t samples,
                                                     RngStream& rng) {
    if (!body.contains(x)) throw std::invalid_argument("local_conductance_mc: x outside body");
    ChainBudget scratch;
    Point y;
    std::int64_t inside = 0;
    for (std::int64_t t = 0; t < samples; ++t) {
        detail::propose_in_ball(x, delta, rng, scratch, y);
        if (body.contains(y)) ++inside;
    }
    const double p = static_cast<double>(inside) / static_cast<double>(samples);
    return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples))};
}

/// Computes beta, the exhaustive conductance, and verifies Cheeger's
/// inequality lambda >= phi^2 / 2.
inline SpectralReport check_cheeger(const DiscreteChain& chain) {
    SpectralReport report;
    report.beta = second_eigenvalue(chain);
    report.lambda = 1.0 - report.beta;
    report.conductance = conductance_exact(chain);
    report.conductance_exhaustive = true;
    report.cheeger_ok = report.lambda >= report.conductance * report.conductance / 2.0 - 1e-12;
    return report;
}

struct ErrorLawPoint {
    std::int64_t n = 0;
    double e2n = 0.0;  // empirical squared error times n
};

/// Empirical e^2 * n of the time-average estimator along a horizon schedule.
/// f must be centered and normalized under pi. The chain starts at state 0 and
/// X_1 is one kernel step from there (the burn-in convention of the continuous
/// chains, mapped to the discrete laboratory).
inline std::vector<ErrorLawPoint> asymptotic_error_law(const DiscreteChain& chain,
                                                       const std::vector<double>& f,
                                                       const std::vector<std::int64_t>& schedule,
                                                       int replications, std::uint64_t seed) {
    if (static_cast<int>(f.size()) != chain.states)
        throw std::invalid_argument("asymptotic_error_law: f size mismatch");
    if (schedule.empty()) throw std::invalid_argument("asymptotic_error_law: empty schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("asymptotic_error_law: schedule must increase");

    const int N = chain.states;
    double target = 0.0;
    for (int i = 0; i < N; ++i) target += chain.pi[i] * f[i];

    // row CDFs for inverse-transform stepping
    std::vector<double> cdf(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int j = 0; j < N; ++j) {
            acc += chain.k(i, j);
            cdf[static_cast<std::size_t>(i) * N + j] = acc;
        }
        cdf[static_cast<std::size_t>(i) * N + N - 1] = 1.0;
    }

    const std::int64_t horizon = schedule.back();
    const std::size_t checkpoints = schedule.size();
    std::vector<double> sq_err(static_cast<std::size_t>(replications) * checkpoints);

    detail::parallel_for_index(replications, [&](int r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r));
        int state = 0;
        double sum = 0.0;
        std::size_t next_cp = 0;
        for (std::int64_t t = 1; t <= horizon; ++t) {
            const double u = rng.next_double();
            const double* row = &cdf[static_cast<std::size_t>(state) * N];
            int s = 0;
            while (s < N - 1 && row[s] < u) ++s;
            state = s;
            sum += f[state];
            if (t == schedule[next_cp]) {
                const double err = sum / static_cast<double>(t) - target;
                sq_err[static_cast<std::size_t>(r) * checkpoints + next_cp] = err * err;
                ++next_cp;
            }
        }
    });

    std::vector<ErrorLawPoint> out(checkpoints);
    for (std::size_t c = 0; c < checkpoints; ++c) {
        double acc = 0.0;
        for (int r = 0; r < replications; ++r)
            acc += sq_err[static_cast<std::size_t>(r) * checkpoints + c];
        out[c] = {schedule[c], acc / replications * static_cast<double>(schedule[c])};
    }
    return out;
}

}  // namespace mcdens
