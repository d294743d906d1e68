#pragma once

#include <Eigen/Dense>

#include "ebbeam/grid.hpp"

namespace ebbeam {

// Sine basis e_j(x) = sin(j x), j = 1..B, sampled on the grid. Shared by the
// spatial Galerkin discretizations and the strong-form operator application.
struct SineBasis {
    Grid grid;
    int size = 0;
    Eigen::MatrixXd table;     // n_x x B, table(i, j-1) = sin(j x_i)
    Eigen::MatrixXd weighted;  // diag(w) * table, w = trapezoid weights

    static SineBasis make(const Grid& g, int B) {
        SineBasis b;
        b.grid = g;
        b.size = B;
        b.table.resize(g.n, B);
        for (int j = 1; j <= B; ++j)
            b.table.col(j - 1) = (double(j) * g.x.array()).sin();
        b.weighted = g.weights().asDiagonal() * b.table;
        return b;
    }

    // Coefficients c_j = (2/pi) int f sin(jx) dx (trapezoid); exact inverse of
    // synth for band-limited samples below the grid Nyquist.
    Eigen::VectorXd analyze(const Eigen::VectorXd& f) const {
        return (2.0 / kPi) * (weighted.transpose() * f);
    }
    Eigen::VectorXcd analyze(const Eigen::VectorXcd& f) const {
        return (2.0 / kPi) * (weighted.transpose() * f);
    }

    Eigen::VectorXd synth(const Eigen::VectorXd& c) const { return table * c; }
    Eigen::VectorXcd synth(const Eigen::VectorXcd& c) const { return table * c; }

    // Plain projections <e_j, f> without the 2/pi normalization.
    Eigen::VectorXd inner(const Eigen::VectorXd& f) const {
        return weighted.transpose() * f;
    }
    Eigen::VectorXcd inner(const Eigen::VectorXcd& f) const {
        return weighted.transpose() * f;
    }

    // Strong form (p u'')'' - g u on grid samples for pinned samples u.
    // Both differentiations happen in sine coordinates; p multiplies in
    // physical space. p u'' vanishes at both ends under pinned conditions,
    // so its sine expansion is legitimate.
    Eigen::VectorXd apply_operator(const Eigen::VectorXd& p, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& u) const {
        Eigen::VectorXd c = analyze(u);
        for (int j = 1; j <= size; ++j) c(j - 1) *= -double(j) * double(j);
        Eigen::VectorXd w = p.array() * synth(c).array();  // p u''
        Eigen::VectorXd d = analyze(w);
        for (int j = 1; j <= size; ++j) d(j - 1) *= -double(j) * double(j);
        return synth(d) - g.cwiseProduct(u);
    }
};

}  // namespace ebbeam
