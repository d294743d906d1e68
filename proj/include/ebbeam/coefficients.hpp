#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "ebbeam/errors.hpp"
#include "ebbeam/grid.hpp"

namespace ebbeam {

inline constexpr double kTolBc = 1e-10;    // boundary constraint alpha+beta at ends
inline constexpr double kTolNorm = 1e-8;   // normalization residual after calibration

// Generator functions (alpha, beta) sampled on the uniform grid. Built-in
// generators also carry analytic derivatives up to third order; sampled
// generators fall back to high-order differencing where derivatives are
// needed.
struct GeneratorPair {
    Grid grid;
    Eigen::VectorXd alpha, beta;
    double p0 = 1.0;
    std::string name = "samples";
    // derivatives [f', f'', f'''] when analytically known
    std::optional<std::array<Eigen::VectorXd, 3>> alpha_derivs;
    std::optional<std::array<Eigen::VectorXd, 3>> beta_derivs;

    static GeneratorPair zero(int n_x, double p0 = 1.0) {
        GeneratorPair g;
        g.grid = Grid::uniform(n_x);
        g.alpha = Eigen::VectorXd::Zero(n_x);
        g.beta = Eigen::VectorXd::Zero(n_x);
        g.p0 = p0;
        g.name = "zero";
        std::array<Eigen::VectorXd, 3> z = {g.alpha, g.alpha, g.alpha};
        g.alpha_derivs = z;
        g.beta_derivs = z;
        return g;
    }

    // alpha = a sin(x), beta = -a sin(x)
    static GeneratorPair sine_pair(int n_x, double amplitude, double p0 = 1.0) {
        GeneratorPair g;
        g.grid = Grid::uniform(n_x);
        const auto& x = g.grid.x;
        g.alpha = amplitude * x.array().sin();
        g.beta = -g.alpha;
        g.p0 = p0;
        g.name = "sine_pair";
        Eigen::VectorXd c = amplitude * x.array().cos();
        std::array<Eigen::VectorXd, 3> da = {c, -g.alpha, -c};
        std::array<Eigen::VectorXd, 3> db = {-c, g.alpha, c};
        g.alpha_derivs = da;
        g.beta_derivs = db;
        return g;
    }

    static GeneratorPair from_samples(const Eigen::VectorXd& alpha,
                                      const Eigen::VectorXd& beta, double p0 = 1.0) {
        GeneratorPair g;
        g.grid = Grid::uniform(static_cast<int>(alpha.size()));
        g.alpha = alpha;
        g.beta = beta;
        g.p0 = p0;
        return g;
    }

    void validate() const {
        if (grid.n < 64) throw ConfigError("generator grid must have n_x >= 64");
        if (std::abs(alpha(0) + beta(0)) > kTolBc ||
            std::abs(alpha(grid.n - 1) + beta(grid.n - 1)) > kTolBc)
            throw BoundaryConstraintViolated("alpha+beta must vanish at x=0 and x=pi");
        if (!(p0 > 0.0)) throw NonPositiveCoefficient("p0 must be positive");
    }
};

// Variable coefficients and the Liouville auxiliaries. Immutable after build.
struct CoefficientProfile {
    Grid grid;
    Eigen::VectorXd rho;   // mass density, exp(4 int alpha)
    Eigen::VectorXd p;     // flexural rigidity, p0 exp(4 int beta)
    Eigen::VectorXd zeta;  // (rho/p)^{1/4}
    Eigen::VectorXd q;     // p^{1/8} rho^{3/8}
    Eigen::VectorXd phi;   // int_0^x zeta
    double p0 = 1.0;       // calibrated value
    double normalization_residual = 0.0;
    GeneratorPair gen;     // retained for the spectral asymptotics
};

// Builds rho, p from the generators; p(0) is recalibrated so that
// int_0^pi (rho/p)^{1/4} dx = pi, which makes arbitrary admissible (alpha,
// beta) usable without hand-tuning.
inline CoefficientProfile build_profile(const GeneratorPair& gen) {
    gen.validate();
    const Grid& g = gen.grid;
    CoefficientProfile prof;
    prof.grid = g;
    prof.gen = gen;

    const Eigen::VectorXd Ia = g.cum_trapezoid(gen.alpha);
    const Eigen::VectorXd Ib = g.cum_trapezoid(gen.beta);
    prof.rho = (4.0 * Ia.array()).exp();
    const Eigen::VectorXd base =
        (prof.rho.array() * (-4.0 * Ib.array()).exp()).pow(0.25);
    const double integral = g.trapezoid(base);
    prof.p0 = std::pow(integral / kPi, 4.0);
    prof.p = prof.p0 * (4.0 * Ib.array()).exp();

    if (!prof.rho.allFinite() || !prof.p.allFinite())
        throw NonPositiveCoefficient("coefficient quadrature produced non-finite values");
    if ((prof.rho.array() <= 0.0).any() || (prof.p.array() <= 0.0).any())
        throw NonPositiveCoefficient("rho and p must stay positive");

    prof.zeta = (prof.rho.array() / prof.p.array()).pow(0.25);
    prof.q = prof.p.array().pow(0.125) * prof.rho.array().pow(0.375);
    prof.phi = g.cum_trapezoid(prof.zeta);
    prof.normalization_residual = g.trapezoid(prof.zeta) - kPi;
    if (std::abs(prof.normalization_residual) > kTolNorm)
        throw NonPositiveCoefficient("normalization failed after calibration");
    return prof;
}

// Inverse of the monotone map phi by binary search + linear interpolation.
inline double invert_phi(const CoefficientProfile& prof, double xi) {
    const auto& phi = prof.phi;
    const int n = prof.grid.n;
    if (xi <= phi(0)) return prof.grid.x(0);
    if (xi >= phi(n - 1)) return prof.grid.x(n - 1);
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (phi(mid) <= xi)
            lo = mid;
        else
            hi = mid;
    }
    const double t = (xi - phi(lo)) / (phi(hi) - phi(lo));
    return prof.grid.x(lo) + t * (prof.grid.x(hi) - prof.grid.x(lo));
}

inline double interp_linear(const Grid& g, const Eigen::VectorXd& f, double x) {
    if (x <= 0.0) return f(0);
    if (x >= kPi) return f(g.n - 1);
    const double s = x / g.h;
    const int i = std::min(static_cast<int>(s), g.n - 2);
    const double t = s - i;
    return (1.0 - t) * f(i) + t * f(i + 1);
}

// y(xi) = q(psi(xi)) u(psi(xi)) on a uniform xi-grid of the same size,
// psi = phi^{-1}.
inline Eigen::VectorXd barcilon_gottlieb_transform(const CoefficientProfile& prof,
                                                   const Eigen::VectorXd& u) {
    const Grid& g = prof.grid;
    for (int i = 1; i < g.n; ++i)
        if (!(prof.phi(i) > prof.phi(i - 1)))
            throw NonPositiveCoefficient("phi is not strictly increasing");
    Eigen::VectorXd y(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double xi = g.x(i) / kPi * prof.phi(g.n - 1);
        const double xs = invert_phi(prof, xi);
        y(i) = interp_linear(g, prof.q, xs) * interp_linear(g, u, xs);
    }
    return y;
}

// Generator derivatives up to third order: analytic when available, else
// repeated 7-point differencing with a noise guard.
inline std::array<Eigen::VectorXd, 3> generator_derivatives(
    const Grid& g, const Eigen::VectorXd& f,
    const std::optional<std::array<Eigen::VectorXd, 3>>& analytic) {
    if (analytic) return *analytic;
    Eigen::VectorXd d1 = difference7(g, f);
    Eigen::VectorXd d2 = difference7(g, d1);
    Eigen::VectorXd d3 = difference7(g, d2);
    const double scale = std::max(f.cwiseAbs().maxCoeff(), 1e-300);
    if (d3.cwiseAbs().maxCoeff() > 1e3 * scale)
        throw InsufficientSmoothness(
            "third differences of sampled generators exceed the noise threshold");
    return {d1, d2, d3};
}

}  // namespace ebbeam
