#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "ebbeam/errors.hpp"

namespace ebbeam {

inline constexpr double kPi = std::numbers::pi_v<double>;

// Uniform grid on [0, pi] including both endpoints.
struct Grid {
    int n = 0;       // point count
    double h = 0.0;  // spacing pi/(n-1)
    Eigen::VectorXd x;

    static Grid uniform(int n_points) {
        if (n_points < 3) throw ConfigError("grid needs at least 3 points");
        Grid g;
        g.n = n_points;
        g.h = kPi / (n_points - 1);
        g.x = Eigen::VectorXd::LinSpaced(n_points, 0.0, kPi);
        g.x(n_points - 1) = kPi;  // exact endpoint
        return g;
    }

    bool same_as(const Grid& other) const { return n == other.n; }

    // Composite trapezoid over the full interval.
    double trapezoid(const Eigen::VectorXd& f) const {
        double s = 0.5 * (f(0) + f(n - 1));
        for (int i = 1; i < n - 1; ++i) s += f(i);
        return s * h;
    }

    // Prefix integrals F(x_i) = int_0^{x_i} f, composite trapezoid.
    Eigen::VectorXd cum_trapezoid(const Eigen::VectorXd& f) const {
        Eigen::VectorXd F(n);
        F(0) = 0.0;
        for (int i = 1; i < n; ++i) F(i) = F(i - 1) + 0.5 * h * (f(i) + f(i - 1));
        return F;
    }

    // Composite Simpson; the last interval falls back to trapezoid when the
    // interval count is odd.
    double simpson(const Eigen::VectorXd& f) const {
        const int intervals = n - 1;
        const int pairs = intervals / 2;
        double s = 0.0;
        for (int k = 0; k < pairs; ++k) {
            const int i = 2 * k;
            s += (h / 3.0) * (f(i) + 4.0 * f(i + 1) + f(i + 2));
        }
        if (intervals % 2 != 0) s += 0.5 * h * (f(n - 2) + f(n - 1));
        return s;
    }

    // Interior trapezoid weights as a vector (h at interior, h/2 at ends).
    Eigen::VectorXd weights() const {
        Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
        w(0) = 0.5 * h;
        w(n - 1) = 0.5 * h;
        return w;
    }
};

// Central finite differences on the uniform grid, second-order one-sided at
// the ends. Used for sampled generators without analytic derivatives.
inline Eigen::VectorXd difference(const Grid& g, const Eigen::VectorXd& f) {
    const int n = g.n;
    Eigen::VectorXd d(n);
    for (int i = 1; i < n - 1; ++i) d(i) = (f(i + 1) - f(i - 1)) / (2.0 * g.h);
    d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * g.h);
    d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * g.h);
    return d;
}

// Seventh-order-accurate first derivative (7-point stencil), used to reach
// third derivatives of sampled generators without losing too many digits.
inline Eigen::VectorXd difference7(const Grid& g, const Eigen::VectorXd& f) {
    const int n = g.n;
    if (n < 7) return difference(g, f);
    Eigen::VectorXd d(n);
    const double c1 = 45.0, c2 = -9.0, c3 = 1.0, denom = 60.0 * g.h;
    for (int i = 3; i < n - 3; ++i) {
        d(i) = (c3 * (f(i + 3) - f(i - 3)) + c2 * (f(i + 2) - f(i - 2)) +
                c1 * (f(i + 1) - f(i - 1))) /
               denom;
    }
    // One-sided 7-point closures at each end.
    const double b[7] = {-147.0, 360.0, -450.0, 400.0, -225.0, 72.0, -10.0};
    for (int i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (int k = 0; k < 7; ++k) acc += b[k] * f(i + k);
        d(i) = acc / (60.0 * g.h);
        acc = 0.0;
        for (int k = 0; k < 7; ++k) acc += b[k] * f(n - 1 - i - k);
        d(n - 1 - i) = -acc / (60.0 * g.h);
    }
    return d;
}

}  // namespace ebbeam
