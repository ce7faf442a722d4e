#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcdens/budget.hpp"
#include "mcdens/rng.hpp"

namespace mcdens {

using Point = std::vector<double>;

inline double squared_norm(const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double norm(const Point& x) { return std::sqrt(squared_norm(x)); }

inline double distance(const Point& x, const Point& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Volume of the Euclidean unit ball B^d = pi^{d/2} / Gamma(d/2 + 1).
inline double vol_unit_ball(int d) {
    if (d < 1) throw std::invalid_argument("vol_unit_ball: dimension must be >= 1");
    if (d <= 100)
        return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    return std::exp(0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0));
}

/// Gamma(z + 1/2) / Gamma(z) for z > 0. Bounded above by sqrt(z).
inline double gamma_half_ratio(double z) {
    if (!(z > 0.0)) throw std::domain_error("gamma_half_ratio: z must be positive");
    return std::exp(std::lgamma(z + 0.5) - std::lgamma(z));
}

enum class BodyKind { UnitBall, AxisCube, UnitInterval };

/// One of the built-in convex bodies: the unit ball B^d, the cube [0,1]^d, or
/// the interval [0,1]. Arbitrary bodies are out of scope; everything the
/// estimators need is a membership test, a diameter, a volume and (for the
/// built-ins) a direct uniform sampler.
class ConvexBody {
public:
    static ConvexBody unit_ball(int d) { return ConvexBody(BodyKind::UnitBall, d); }
    static ConvexBody axis_cube(int d) { return ConvexBody(BodyKind::AxisCube, d); }
    static ConvexBody unit_interval() { return ConvexBody(BodyKind::UnitInterval, 1); }

    BodyKind kind() const { return kind_; }
    int dim() const { return dim_; }

    double diameter() const {
        switch (kind_) {
            case BodyKind::UnitBall: return 2.0;
            case BodyKind::AxisCube: return std::sqrt(static_cast<double>(dim_));
            case BodyKind::UnitInterval: return 1.0;
        }
        return 0.0;
    }

    double volume() const {
        switch (kind_) {
            case BodyKind::UnitBall: return vol_unit_ball(dim_);
            case BodyKind::AxisCube:
            case BodyKind::UnitInterval: return 1.0;
        }
        return 0.0;
    }

    Point center() const {
        switch (kind_) {
            case BodyKind::UnitBall: return Point(dim_, 0.0);
            case BodyKind::AxisCube:
            case BodyKind::UnitInterval: return Point(dim_, 0.5);
        }
        return {};
    }

    /// Closed-set membership; boundary points count as inside.
    bool contains(const Point& x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw std::invalid_argument("ConvexBody::contains: dimension mismatch");
        switch (kind_) {
            case BodyKind::UnitBall:
                return squared_norm(x) <= 1.0;
            case BodyKind::AxisCube:
            case BodyKind::UnitInterval:
                return std::all_of(x.begin(), x.end(),
                                   [](double v) { return v >= 0.0 && v <= 1.0; });
        }
        return false;
    }

    /// Uniform sample. Ball: Gaussian direction scaled by U^{1/d}
    /// (d+1 logical draws); cube/interval: one draw per coordinate.
    Point sample_uniform(RngStream& rng, ChainBudget& budget) const {
        Point x(dim_);
        switch (kind_) {
            case BodyKind::UnitBall: {
                gaussian_direction(rng, x);
                const double radius =
                    std::pow(rng.next_double(), 1.0 / static_cast<double>(dim_));
                for (double& v : x) v *= radius;
                budget.rng_draws += static_cast<std::uint64_t>(dim_) + 1;
                break;
            }
            case BodyKind::AxisCube:
            case BodyKind::UnitInterval: {
                for (double& v : x) v = rng.next_double();
                budget.rng_draws += static_cast<std::uint64_t>(dim_);
                break;
            }
        }
        return x;
    }

    Point sample_uniform(RngStream& rng) const {
        ChainBudget scratch;
        return sample_uniform(rng, scratch);
    }

    /// Fills `dir` with a uniformly random unit vector.
    static void gaussian_direction(RngStream& rng, Point& dir) {
        const std::size_t d = dir.size();
        for (std::size_t i = 0; i + 1 < d; i += 2) rng.next_gaussian_pair(dir[i], dir[i + 1]);
        if (d % 2 == 1) {
            double z0, z1;
            rng.next_gaussian_pair(z0, z1);
            dir[d - 1] = z0;
        }
        double n = norm(dir);
        while (n == 0.0) {  // essentially impossible; regenerate rather than divide by 0
            for (std::size_t i = 0; i + 1 < d; i += 2) rng.next_gaussian_pair(dir[i], dir[i + 1]);
            if (d % 2 == 1) {
                double z0, z1;
                rng.next_gaussian_pair(z0, z1);
                dir[d - 1] = z0;
            }
            n = norm(dir);
        }
        for (double& v : dir) v /= n;
    }

private:
    ConvexBody(BodyKind kind, int d) : kind_(kind), dim_(d) {
        if (d < 1) throw std::invalid_argument("ConvexBody: dimension must be >= 1");
    }

    BodyKind kind_;
    int dim_;
};

/// Membership oracle; the call is what the cost model charges for.
inline bool membership(const ConvexBody& body, const Point& x, ChainBudget& budget) {
    ++budget.membership_calls;
    return body.contains(x);
}

struct PackingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Disjoint balls B(y_i, r) inside the unit ball.
struct Packing {
    std::vector<Point> centers;
    double radius = 0.0;
};

/// Deterministic packing of m disjoint balls of radius r = m^{-1/d}/2 inside
/// B^d: grid points of pitch 2r within the ball of radius 1-r, taken in order
/// of decreasing distance from the origin (lexicographic tie-break). Throws
/// PackingError if the grid yields fewer than m points.
inline Packing packing_on_ball(int m, int d) {
    if (m < 1 || d < 1) throw std::invalid_argument("packing_on_ball: m, d must be >= 1");
    const double r = 0.5 * std::pow(static_cast<double>(m), -1.0 / d);
    const double pitch = 2.0 * r;
    const double reach = 1.0 - r;
    const int kmax = static_cast<int>(std::floor(reach / pitch + 1e-12));

    std::vector<Point> grid;
    std::vector<int> k(d, -kmax);
    while (true) {
        Point p(d);
        for (int i = 0; i < d; ++i) p[i] = pitch * k[i];
        if (squared_norm(p) <= reach * reach * (1.0 + 1e-12)) grid.push_back(std::move(p));
        int axis = d - 1;
        while (axis >= 0 && k[axis] == kmax) k[axis--] = -kmax;
        if (axis < 0) break;
        ++k[axis];
    }

    std::sort(grid.begin(), grid.end(), [](const Point& a, const Point& b) {
        const double na = squared_norm(a), nb = squared_norm(b);
        if (na != nb) return na > nb;
        return a < b;
    });

    if (static_cast<int>(grid.size()) < m)
        throw PackingError("packing_on_ball: grid yields only " +
                           std::to_string(grid.size()) + " centers for m=" +
                           std::to_string(m));
    grid.resize(m);
    return Packing{std::move(grid), r};
}

}  // namespace mcdens
