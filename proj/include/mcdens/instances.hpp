#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mcdens/budget.hpp"
#include "mcdens/geometry.hpp"
#include "mcdens/quadrature.hpp"
#include "mcdens/rng.hpp"

namespace mcdens {

enum class WeightClass { RatioBounded, LogConcaveLipschitz };

/// Non-normalized density oracle rho > 0. Every counted evaluation goes
/// through operator(), so algorithm cost equals the number of function values.
struct WeightOracle {
    std::function<double(const Point&)> evaluate;
    WeightClass class_tag = WeightClass::RatioBounded;
    double C = 1.0;      // ratio bound, class_tag == RatioBounded
    double alpha = 0.0;  // Lipschitz constant of log rho, class_tag == LogConcaveLipschitz

    double operator()(const Point& x, ChainBudget& budget) const {
        ++budget.rho_evals;
        const double v = evaluate(x);
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::domain_error("WeightOracle: density must be positive and finite");
        return v;
    }
};

enum class IntegrandNorm { SupBounded1, L2RhoBounded1 };

struct IntegrandOracle {
    std::function<double(const Point&)> evaluate;
    IntegrandNorm norm_tag = IntegrandNorm::SupBounded1;

    double operator()(const Point& x, ChainBudget& budget) const {
        ++budget.f_evals;
        return evaluate(x);
    }
};

/// A problem (f, rho) on a body, with the exact (or independently computed)
/// value of S(f, rho) when available. truth_ci is the half-width of the
/// confidence interval of `truth` (0 for exact / quadrature-grade values).
struct ProblemInstance {
    ConvexBody body = ConvexBody::unit_interval();
    IntegrandOracle f;
    WeightOracle rho;
    std::optional<double> truth;
    double truth_ci = 0.0;
    std::string family_id;
};

// ---------------------------------------------------------------------------
// Hard family on [0,1] for the ratio-bounded class: 2n equal cells, rho = C on
// a size-l cell subset I and 1 elsewhere, f = +-1 on I and 0 elsewhere.
// ---------------------------------------------------------------------------

struct FcHardInstance : ProblemInstance {
    int m = 0;  // number of cells = 2n
    int l = 0;  // |I|
    double C = 1.0;
    double c_ml = 1.0;              // integral of rho
    std::vector<int> cells;         // I, sorted, 0-based
    std::vector<int> signs;         // eps_j in {-1,+1}, parallel to cells
};

/// Subset size l used by the hard-prior construction. C = 1 degenerates to a
/// constant density with every cell marked (the classical bounded-integrand
/// class); for 1 < C < 2 the ceiling is clamped to the cell count.
inline int fc_subset_size(int m, double C) {
    if (C == 1.0) return m;
    if (static_cast<double>(m) >= C - 1.0)
        return std::min<int>(m, static_cast<int>(std::ceil(static_cast<double>(m) / (C - 1.0))));
    return 1;
}

inline FcHardInstance make_fc_instance(int n, double C, std::vector<int> cells,
                                       std::vector<int> signs) {
    if (n < 1) throw std::invalid_argument("make_fc_instance: n >= 1");
    if (!(C >= 1.0)) throw std::invalid_argument("make_fc_instance: C must be >= 1");
    const int m = 2 * n;
    const int l = fc_subset_size(m, C);
    if (static_cast<int>(cells.size()) != l || signs.size() != cells.size())
        throw std::invalid_argument("make_fc_instance: |I| must equal l = " +
                                    std::to_string(l));
    auto in_range = [m](int j) { return j >= 0 && j < m; };
    for (int j : cells)
        if (!in_range(j)) throw std::invalid_argument("make_fc_instance: cell index out of range");
    for (int s : signs)
        if (s != 1 && s != -1) throw std::invalid_argument("make_fc_instance: signs must be +-1");

    FcHardInstance inst;
    inst.body = ConvexBody::unit_interval();
    inst.m = m;
    inst.l = l;
    inst.C = C;
    inst.c_ml = (l * C + (m - l)) / static_cast<double>(m);
    inst.cells = std::move(cells);
    inst.signs = std::move(signs);

    auto rho_table = std::make_shared<std::vector<double>>(m, 1.0);
    auto f_table = std::make_shared<std::vector<double>>(m, 0.0);
    for (std::size_t k = 0; k < inst.cells.size(); ++k) {
        (*rho_table)[inst.cells[k]] = C;
        (*f_table)[inst.cells[k]] = inst.signs[k];
    }
    auto cell_of = [m](const Point& x) {
        int j = static_cast<int>(x[0] * m);
        return std::min(std::max(j, 0), m - 1);
    };
    inst.rho = WeightOracle{
        [rho_table, cell_of](const Point& x) { return (*rho_table)[cell_of(x)]; },
        WeightClass::RatioBounded, C, 0.0};
    inst.f = IntegrandOracle{
        [f_table, cell_of](const Point& x) { return (*f_table)[cell_of(x)]; },
        IntegrandNorm::SupBounded1};

    int sign_sum = 0;
    for (int s : inst.signs) sign_sum += s;
    inst.truth = C * sign_sum / (m * inst.c_ml);
    inst.family_id = "fc-hard";
    return inst;
}

/// Draws (I, eps) from the hard prior: I uniform over size-l subsets of the
/// 2n cells, signs i.i.d. +-1.
inline FcHardInstance sample_fc_prior(int n, double C, RngStream& rng) {
    const int m = 2 * n;
    const int l = fc_subset_size(m, C);
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    for (int i = 0; i < l; ++i) {
        const int j = i + static_cast<int>(rng.next_double() * (m - i));
        std::swap(idx[i], idx[std::min(j, m - 1)]);
    }
    std::vector<int> cells(idx.begin(), idx.begin() + l);
    std::sort(cells.begin(), cells.end());
    std::vector<int> signs(l);
    for (int& s : signs) s = rng.next_double() < 0.5 ? -1 : 1;
    return make_fc_instance(n, C, std::move(cells), std::move(signs));
}

// ---------------------------------------------------------------------------
// Hard family on the unit ball for the log-concave Lipschitz class:
// rho_i = c_i exp(-alpha ||y - y_i||), f_i = +-c~_i on the packing ball B_i,
// normalized so that the density integrates to 1 and ||f||_{2,rho} = 1.
// ---------------------------------------------------------------------------

namespace detail {

/// Stratified Monte Carlo value of integral over B^d of exp(-alpha||y - c||) dy
/// with a 3-sigma confidence half-width, used where quadrature is not wired up
/// (d > 3). Deterministic for fixed inputs.
inline std::pair<double, double> exp_offcenter_mc(int d, double alpha, const Point& c,
                                                  int strata = 64,
                                                  int per_stratum = 50000) {
    RngStream rng(0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(d),
                  static_cast<std::uint64_t>(alpha * 8192.0) + 1315423911ull);
    ChainBudget scratch;
    const ConvexBody ball = ConvexBody::unit_ball(d);
    const double vol = ball.volume();
    double mean_total = 0.0, var_total = 0.0;
    Point dir(d);
    for (int k = 0; k < strata; ++k) {
        double sum = 0.0, sq = 0.0;
        for (int t = 0; t < per_stratum; ++t) {
            ConvexBody::gaussian_direction(rng, dir);
            const double u = (k + rng.next_double()) / strata;
            const double radius = std::pow(u, 1.0 / d);
            double dist2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double diff = radius * dir[i] - c[i];
                dist2 += diff * diff;
            }
            const double v = std::exp(-alpha * std::sqrt(dist2));
            sum += v;
            sq += v * v;
        }
        const double mu = sum / per_stratum;
        mean_total += mu / strata;
        var_total += (sq / per_stratum - mu * mu) / (strata * strata * per_stratum);
    }
    return {vol * mean_total, 3.0 * vol * std::sqrt(std::max(var_total, 0.0))};
}

}  // namespace detail

/// Builds the i-th hard instance (sign * f_i, rho_i) on B^d from a packing.
/// Normalization integrals use radial quadrature for d <= 3 and stratified
/// Monte Carlo (with truth_ci reporting the 3-sigma half-width) above.
inline ProblemInstance make_fad_instance(int d, double alpha, const Packing& packing,
                                         int i, int sign = 1) {
    if (d < 1) throw std::invalid_argument("make_fad_instance: d >= 1");
    if (alpha < 0.0) throw std::invalid_argument("make_fad_instance: alpha >= 0");
    if (i < 0 || i >= static_cast<int>(packing.centers.size()))
        throw std::invalid_argument("make_fad_instance: center index out of range");
    if (sign != 1 && sign != -1) throw std::invalid_argument("make_fad_instance: sign +-1");
    const double r = packing.radius;
    for (const Point& y : packing.centers) {
        if (static_cast<int>(y.size()) != d)
            throw std::invalid_argument("make_fad_instance: center dimension mismatch");
        if (norm(y) > 1.0 - r + 1e-9)
            throw std::invalid_argument("make_fad_instance: packing ball leaves the body");
    }

    const Point center = packing.centers[i];
    const double numer = exp_ball_integral(d, alpha, r);
    double denom, denom_ci = 0.0;
    if (d <= 3) {
        denom = exp_offcenter_ball_integral(d, alpha, center);
    } else {
        auto [value, ci] = detail::exp_offcenter_mc(d, alpha, center);
        denom = value;
        denom_ci = ci;
    }

    const double S = std::sqrt(numer / denom);
    const double c_norm = 1.0 / denom;
    const double f_height = 1.0 / S;  // makes ||f||_{2,rho} = 1

    ProblemInstance inst;
    inst.body = ConvexBody::unit_ball(d);
    inst.rho = WeightOracle{
        [center, alpha, c_norm](const Point& x) {
            return c_norm * std::exp(-alpha * distance(x, center));
        },
        WeightClass::LogConcaveLipschitz, std::exp(alpha * 2.0), alpha};
    inst.f = IntegrandOracle{
        [center, r, f_height, sign](const Point& x) {
            return distance(x, center) <= r ? sign * f_height : 0.0;
        },
        IntegrandNorm::L2RhoBounded1};
    inst.truth = sign * S;
    // d(S)/S = d(denom)/(2 denom)
    inst.truth_ci = S * denom_ci / (2.0 * denom);
    inst.family_id = "fad-hard[" + std::to_string(i) + (sign > 0 ? ",+" : ",-") + "]";
    return inst;
}

/// Full 2m-instance family {(+-f_i, rho_i)} for the adaptivity experiments.
inline std::vector<ProblemInstance> make_fad_family(int d, double alpha,
                                                    const Packing& packing) {
    std::vector<ProblemInstance> family;
    family.reserve(2 * packing.centers.size());
    for (int i = 0; i < static_cast<int>(packing.centers.size()); ++i)
        for (int sign : {+1, -1})
            family.push_back(make_fad_instance(d, alpha, packing, i, sign));
    return family;
}

// ---------------------------------------------------------------------------
// Benign sanity-check instances.
// ---------------------------------------------------------------------------

inline ProblemInstance make_smooth_instance(const std::string& name) {
    ProblemInstance inst;
    inst.family_id = name;
    if (name == "constant-density") {
        inst.body = ConvexBody::unit_interval();
        inst.rho = WeightOracle{[](const Point&) { return 1.0; },
                                WeightClass::RatioBounded, 1.0, 0.0};
        inst.f = IntegrandOracle{[](const Point&) { return 0.3; },
                                 IntegrandNorm::SupBounded1};
        inst.truth = 0.3;
    } else if (name == "linear-f") {
        inst.body = ConvexBody::unit_interval();
        inst.rho = WeightOracle{[](const Point&) { return 1.0; },
                                WeightClass::RatioBounded, 1.0, 0.0};
        inst.f = IntegrandOracle{[](const Point& x) { return x[0]; },
                                 IntegrandNorm::SupBounded1};
        inst.truth = 0.5;
    } else if (name == "gaussian-like") {
        const double alpha = 2.0;
        inst.body = ConvexBody::unit_ball(2);
        inst.rho = WeightOracle{
            [alpha](const Point& x) { return std::exp(-alpha * norm(x)); },
            WeightClass::LogConcaveLipschitz, std::exp(alpha * 2.0), alpha};
        inst.f = IntegrandOracle{[](const Point& x) { return x[0]; },
                                 IntegrandNorm::SupBounded1};
        inst.truth = 0.0;  // odd integrand against a radial density
    } else {
        throw std::invalid_argument("make_smooth_instance: unknown name '" + name + "'");
    }
    return inst;
}

}  // namespace mcdens
