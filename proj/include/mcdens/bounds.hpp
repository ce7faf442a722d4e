#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mcdens {

/// A bound value together with the branch of the formula that produced it.
struct BoundValue {
    std::string name;
    double value = 0.0;
    std::string regime;
};

/// Worst-case error lower bound on F_C for any Monte Carlo method using n
/// values of f and rho.
inline double lower_bound_fc(std::int64_t n, double C) {
    const double k = std::numbers::sqrt2 / 6.0;
    if (2.0 * static_cast<double>(n) >= C - 1.0)
        return k * std::sqrt(C / (2.0 * static_cast<double>(n)));
    return k * 3.0 * C / (C + 2.0 * static_cast<double>(n) - 1.0);
}

inline std::string lower_bound_fc_regime(std::int64_t n, double C) {
    return 2.0 * static_cast<double>(n) >= C - 1.0 ? "2n>=C-1" : "2n<C-1";
}

/// Error upper bound of the simple Monte Carlo quotient estimator on F_C.
inline double upper_bound_simple(std::int64_t n, double C) {
    return 2.0 * std::min(1.0, std::sqrt(2.0 * C / static_cast<double>(n)));
}

inline std::string upper_bound_simple_regime(std::int64_t n, double C) {
    return 2.0 * C / static_cast<double>(n) >= 1.0 ? "clamped" : "sqrt";
}

/// Lower bound for every non-adaptive method on the log-concave Lipschitz
/// class over a body with vol(Omega)/vol(B^d) = vol_ratio.
inline double lower_bound_nonadaptive(std::int64_t n, int d, double alpha,
                                      double vol_ratio) {
    double log_fact = std::lgamma(static_cast<double>(d) + 1.0);
    double log_val = (-0.5 * d - 1.5) * std::numbers::ln2 + 0.5 * std::log(vol_ratio) +
                     0.5 * d * std::log(alpha) - 0.5 * log_fact -
                     0.5 * std::log(static_cast<double>(n));
    if (alpha == 0.0) return 0.0;
    return std::exp(log_val);
}

/// Validity of the sample-size condition 2n >= (alpha/log 4)^d * vol_ratio.
/// (The packing threshold n_Omega is taken as satisfied for the unit ball at
/// the scales this library runs.)
inline bool lower_bound_nonadaptive_valid(std::int64_t n, int d, double alpha,
                                          double vol_ratio) {
    const double need = std::pow(alpha / std::log(4.0), d) * vol_ratio;
    return 2.0 * static_cast<double>(n) >= need;
}

/// Conductance lower bound for the Metropolis chain over a ball walk with
/// local-conductance floor l on a body of diameter D.
inline double conductance_lb_metropolis(double l, double delta, double D, int d,
                                        double alpha) {
    if (!(l > 0.0 && l <= 1.0)) throw std::invalid_argument("conductance_lb: l in (0,1]");
    if (!(delta > 0.0 && D > 0.0)) throw std::invalid_argument("conductance_lb: delta, D > 0");
    const double diffusive =
        std::sqrt(std::numbers::pi / 2.0) * l * delta / (D * std::sqrt(d + 1.0));
    return (l * std::exp(-alpha * delta) / 8.0) * std::min(diffusive, 1.0);
}

inline std::string conductance_lb_metropolis_regime(double l, double delta, double D,
                                                    int d, double alpha) {
    (void)alpha;
    const double diffusive =
        std::sqrt(std::numbers::pi / 2.0) * l * delta / (D * std::sqrt(d + 1.0));
    return diffusive < 1.0 ? "diffusive" : "unit";
}

/// Specialization to the unit ball (l = 0.3, D = 2), valid for
/// delta <= 1/sqrt(d+1): phi >= sqrt(pi/2) * 9 delta / (1600 sqrt(d+1)) * e^{-alpha delta}.
inline double conductance_lb_ball(double delta, int d, double alpha) {
    return std::sqrt(std::numbers::pi / 2.0) * 9.0 * delta /
           (1600.0 * std::sqrt(d + 1.0)) * std::exp(-alpha * delta);
}

/// Ball-walk step width maximizing the conductance bound.
inline double delta_star(int d, double alpha) {
    const double geometric = 1.0 / std::sqrt(d + 1.0);
    if (alpha <= 0.0) return geometric;
    return std::min(geometric, 1.0 / alpha);
}

/// Asymptotic ceiling of e^2 * n for the Metropolis estimator on the unit
/// ball: (8*1600^2 / 81 pi) (d+1) e^{2 alpha delta} / delta^2.
inline double error_const_metropolis(int d, double delta, double alpha) {
    if (!(delta > 0.0)) throw std::invalid_argument("error_const_metropolis: delta > 0");
    const double c = 8.0 * 1600.0 * 1600.0 / (81.0 * std::numbers::pi);
    return c * (d + 1.0) * std::exp(2.0 * alpha * delta) / (delta * delta);
}

/// Dimension-and-Lipschitz ceiling at the tuned width delta*.
inline double error_const_metropolis_tract(int d, double alpha) {
    return 594700.0 * (d + 1.0) * std::max(static_cast<double>(d + 1), alpha * alpha);
}

/// Classical n-point Monte Carlo complexity of F_1: 1/(1 + sqrt n).
inline double classic_f1_error(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("classic_f1_error: n >= 0");
    return 1.0 / (1.0 + std::sqrt(static_cast<double>(n)));
}

}  // namespace mcdens
