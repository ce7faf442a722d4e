#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "mcdens/geometry.hpp"

namespace mcdens {

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a,b] to absolute tolerance tol.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, int max_depth = 48) {
    if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = detail::simpson(a, b, fa, fm, fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Surface area of the unit sphere S^{d-1}.
inline double unit_sphere_area(int d) { return d * vol_unit_ball(d); }

/// Fraction of the sphere S^{d-1} with first coordinate <= u, d >= 2.
inline double sphere_cap_fraction(int d, double u) {
    u = std::clamp(u, -1.0, 1.0);
    if (d == 2) return (std::asin(u) + std::numbers::pi / 2.0) / std::numbers::pi;
    if (d == 3) return 0.5 * (u + 1.0);
    const double expo = 0.5 * (d - 3);
    const double num = integrate([expo](double t) { return std::pow(1.0 - t * t, expo); },
                                 -1.0, u, 1e-13);
    const double den = integrate([expo](double t) { return std::pow(1.0 - t * t, expo); },
                                 -1.0, 1.0, 1e-13);
    return num / den;
}

/// Integral of exp(-alpha ||y||) over the centered ball B(0, r) in R^d.
inline double exp_ball_integral(int d, double alpha, double r) {
    if (r < 0.0) throw std::invalid_argument("exp_ball_integral: r >= 0");
    if (r == 0.0) return 0.0;
    if (alpha == 0.0) return vol_unit_ball(d) * std::pow(r, d);
    if (d == 1) return 2.0 * (1.0 - std::exp(-alpha * r)) / alpha;
    const double area = unit_sphere_area(d);
    return area * integrate(
                      [d, alpha](double s) {
                          return std::pow(s, d - 1) * std::exp(-alpha * s);
                      },
                      0.0, r, 1e-14);
}

/// Integral of exp(-alpha ||y - c||) over the unit ball B^d for a center c
/// strictly inside it, by radial shells around c clipped at the boundary.
inline double exp_offcenter_ball_integral(int d, double alpha, const Point& c) {
    const double cn = norm(c);
    if (cn > 1.0 + 1e-12)
        throw std::invalid_argument("exp_offcenter_ball_integral: center outside ball");
    if (d == 1) {
        if (alpha == 0.0) return 2.0;
        return (2.0 - std::exp(-alpha * (1.0 - c[0])) - std::exp(-alpha * (1.0 + c[0]))) /
               alpha;
    }
    if (cn < 1e-14) return exp_ball_integral(d, alpha, 1.0);

    const double area = unit_sphere_area(d);
    // Shell of radius s around c: fully inside for s <= 1-cn, clipped up to 1+cn.
    auto shell = [&](double s) {
        double frac = 1.0;
        if (s > 1.0 - cn) {
            const double u = (1.0 - cn * cn - s * s) / (2.0 * cn * s);
            frac = sphere_cap_fraction(d, u);
        }
        return std::pow(s, d - 1) * std::exp(-alpha * s) * frac;
    };
    const double inner = integrate(shell, 0.0, 1.0 - cn, 1e-14);
    const double outer = integrate(shell, 1.0 - cn, 1.0 + cn, 1e-13);
    return area * (inner + outer);
}

}  // namespace mcdens
