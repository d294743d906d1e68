#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "ebbeam/eigensolver.hpp"
#include "ebbeam/errors.hpp"
#include "ebbeam/grid.hpp"

namespace ebbeam {

// Real time-periodic field u(t, x) = sum_l u_l(x) e^{ilt} stored as the
// nonnegative-mode coefficients; u_{-l} = conj(u_l) is implied, so reality
// holds by construction. Mode 0 is kept real. Spatial values are grid
// samples with pinned traces.
class TimeFourierField {
  public:
    TimeFourierField() = default;

    static TimeFourierField zero(const Grid& g, int n_time) {
        TimeFourierField f;
        f.grid_ = g;
        f.modes_.assign(n_time + 1, Eigen::VectorXcd::Zero(g.n));
        return f;
    }

    static TimeFourierField from_mean(const Grid& g, const Eigen::VectorXd& v) {
        TimeFourierField f = zero(g, 0);
        f.modes_[0] = v.cast<std::complex<double>>();
        return f;
    }

    const Grid& grid() const { return grid_; }
    int n_time() const { return static_cast<int>(modes_.size()) - 1; }
    int n_x() const { return grid_.n; }

    // Reality is structural (only l >= 0 stored, mode 0 kept real). The
    // pinned trace holds for solver states because they are synthesized from
    // pinned basis functions; forcing-side fields need not vanish at the ends.
    const Eigen::VectorXcd& mode(int l) const { return modes_.at(l); }
    void set_mode(int l, const Eigen::VectorXcd& v) {
        modes_.at(l) = v;
        if (l == 0) modes_[0].imag() = Eigen::VectorXd::Zero(grid_.n);
    }

    double discarded_tail = 0.0;  // L2-type norm of truncated content

    TimeFourierField truncated(int n_new) const {
        TimeFourierField out = zero(grid_, n_new);
        const int keep = std::min(n_new, n_time());
        for (int l = 0; l <= keep; ++l) out.modes_[l] = modes_[l];
        double tail = 0.0;
        for (int l = n_new + 1; l <= n_time(); ++l)
            tail += 2.0 * modes_[l].squaredNorm();
        out.discarded_tail = std::sqrt(tail);
        return out;
    }

    TimeFourierField& operator+=(const TimeFourierField& o) {
        require_grid(o);
        if (o.n_time() > n_time()) modes_.resize(o.n_time() + 1, Eigen::VectorXcd::Zero(grid_.n));
        for (int l = 0; l <= o.n_time(); ++l) modes_[l] += o.modes_[l];
        return *this;
    }
    TimeFourierField& operator-=(const TimeFourierField& o) {
        require_grid(o);
        if (o.n_time() > n_time()) modes_.resize(o.n_time() + 1, Eigen::VectorXcd::Zero(grid_.n));
        for (int l = 0; l <= o.n_time(); ++l) modes_[l] -= o.modes_[l];
        return *this;
    }
    TimeFourierField& operator*=(double c) {
        for (auto& m : modes_) m *= c;
        return *this;
    }
    friend TimeFourierField operator+(TimeFourierField a, const TimeFourierField& b) {
        a += b;
        return a;
    }
    friend TimeFourierField operator-(TimeFourierField a, const TimeFourierField& b) {
        a -= b;
        return a;
    }
    friend TimeFourierField operator*(double c, TimeFourierField a) {
        a *= c;
        return a;
    }

    // Pointwise samples on the uniform time-collocation grid t_m = 2 pi m / C,
    // as a C x n_x real matrix.
    Eigen::MatrixXd collocate(int C) const {
        Eigen::MatrixXd vals = Eigen::MatrixXd::Zero(C, grid_.n);
        vals.rowwise() += modes_[0].real().transpose();
        for (int l = 1; l <= n_time(); ++l) {
            Eigen::VectorXd cs(C), sn(C);
            for (int m = 0; m < C; ++m) {
                const double t = 2.0 * kPi * m / C;
                cs(m) = std::cos(l * t);
                sn(m) = std::sin(l * t);
            }
            vals += 2.0 * (cs * modes_[l].real().transpose() -
                           sn * modes_[l].imag().transpose());
        }
        return vals;
    }

    // Inverse of collocate for band-limited data: coefficients 0..n_out from
    // C >= 2 n_out + 1 samples.
    static TimeFourierField analyze(const Grid& g, const Eigen::MatrixXd& vals, int n_out) {
        const int C = static_cast<int>(vals.rows());
        if (C < 2 * n_out + 1) throw ConfigError("collocation grid too small for bandwidth");
        TimeFourierField out = zero(g, n_out);
        for (int l = 0; l <= n_out; ++l) {
            Eigen::VectorXd cs(C), sn(C);
            for (int m = 0; m < C; ++m) {
                const double t = 2.0 * kPi * m / C;
                cs(m) = std::cos(l * t);
                sn(m) = std::sin(l * t);
            }
            Eigen::VectorXd re = (vals.transpose() * cs) / C;
            Eigen::VectorXd im = -(vals.transpose() * sn) / C;
            if (l == 0) im.setZero();
            Eigen::VectorXcd c(g.n);
            c.real() = re;
            c.imag() = im;
            out.modes_[l] = c;
        }
        return out;
    }

    bool all_finite() const {
        for (const auto& m : modes_)
            if (!m.allFinite()) return false;
        return true;
    }

  private:
    void require_grid(const TimeFourierField& o) const {
        if (!grid_.same_as(o.grid_)) throw ConfigError("field grid mismatch");
    }
    static void pin_mode(Eigen::VectorXcd& m) {
        m(0) = 0.0;
        m(m.size() - 1) = 0.0;
    }

    Grid grid_;
    std::vector<Eigen::VectorXcd> modes_;
};

// ---- Sobolev machinery ----------------------------------------------------

// Spatial H^2 quadratic form int (y^2 + y'^2 + y''^2) dx by grid differences;
// pinned end values are part of the data.
inline double h2_norm_sq(const Grid& g, const Eigen::VectorXcd& y) {
    const int n = g.n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = (i == 0 || i == n - 1) ? 0.5 * g.h : g.h;
        acc += wi * std::norm(y(i));
    }
    for (int i = 0; i + 1 < n; ++i)
        acc += g.h * std::norm((y(i + 1) - y(i)) / g.h);
    for (int i = 1; i + 1 < n; ++i)
        acc += g.h * std::norm((y(i + 1) - 2.0 * y(i) + y(i - 1)) / (g.h * g.h));
    return acc;
}

inline double h2_norm_sq(const Grid& g, const Eigen::VectorXd& y) {
    return h2_norm_sq(g, Eigen::VectorXcd(y.cast<std::complex<double>>()));
}

// ||u||_s^2 = sum_l ||u_l||_{H^2}^2 (1 + |l|^{2s}) over all integer l.
inline double sobolev_norm(const TimeFourierField& u, double s) {
    if (s < 0.0) throw ConfigError("Sobolev index must be nonnegative");
    double acc = h2_norm_sq(u.grid(), u.mode(0));
    for (int l = 1; l <= u.n_time(); ++l)
        acc += 2.0 * (1.0 + std::pow(double(l), 2.0 * s)) * h2_norm_sq(u.grid(), u.mode(l));
    return std::sqrt(acc);
}

enum class Projector { V, W, P_N, P_N_perp };

inline TimeFourierField project(const TimeFourierField& u, Projector which, int N = 0) {
    TimeFourierField out = TimeFourierField::zero(u.grid(), u.n_time());
    switch (which) {
        case Projector::V:
            out = TimeFourierField::zero(u.grid(), 0);
            out.set_mode(0, u.mode(0));
            break;
        case Projector::W:
            for (int l = 1; l <= u.n_time(); ++l) out.set_mode(l, u.mode(l));
            break;
        case Projector::P_N:
            out = TimeFourierField::zero(u.grid(), std::min(N, u.n_time()));
            for (int l = 1; l <= std::min(N, u.n_time()); ++l) out.set_mode(l, u.mode(l));
            break;
        case Projector::P_N_perp:
            for (int l = N + 1; l <= u.n_time(); ++l) out.set_mode(l, u.mode(l));
            break;
    }
    return out;
}

// Pointwise product, computed on an alias-free collocation grid (next power
// of two above the combined bandwidth) and truncated to the exact product
// bandwidth.
inline int next_pow2_at_least(int m) {
    int c = 1;
    while (c < m) c <<= 1;
    return c;
}

inline TimeFourierField field_product(const TimeFourierField& u, const TimeFourierField& v) {
    if (!u.grid().same_as(v.grid())) throw ConfigError("field grid mismatch");
    const int band = u.n_time() + v.n_time();
    const int C = next_pow2_at_least(2 * band + 1);
    Eigen::MatrixXd pu = u.collocate(C);
    Eigen::MatrixXd pv = v.collocate(C);
    Eigen::MatrixXd prod = pu.cwiseProduct(pv);
    return TimeFourierField::analyze(u.grid(), prod, band);
}

// Coefficients of u in the (time-mode x eigenmode) coordinates:
// E(j-1, l-1) = <psi_j, u_l>_{L2} for l = 1..N (the rho-orthonormal basis
// diagonalizes with these plain-L2 projections of rho-expanded content).
inline Eigen::MatrixXcd to_eigen_coords(const TimeFourierField& u, const Spectrum& sp,
                                        const Eigen::VectorXd& rho, const Grid& g, int N) {
    Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(sp.J, N);
    const Eigen::VectorXd w = g.weights();
    Eigen::MatrixXd proj = sp.eigenfunctions.transpose() * (w.asDiagonal() * rho.asDiagonal()).toDenseMatrix();
    for (int l = 1; l <= std::min(N, u.n_time()); ++l) E.col(l - 1) = proj * u.mode(l);
    return E;
}

inline TimeFourierField from_eigen_coords(const Eigen::MatrixXcd& E, const Spectrum& sp,
                                          const Grid& g) {
    const int N = static_cast<int>(E.cols());
    TimeFourierField out = TimeFourierField::zero(g, N);
    for (int l = 1; l <= N; ++l)
        out.set_mode(l, sp.eigenfunctions.cast<std::complex<double>>() * E.col(l - 1));
    return out;
}

// Equivalent s-norm in eigen-coordinates: sum (lambda_j + M)|w_hat|^2 (1+l^{2s}).
inline double eigen_norm(const TimeFourierField& u, const Spectrum& sp,
                         const Eigen::VectorXd& rho, double s) {
    const Grid& g = u.grid();
    Eigen::MatrixXcd E = to_eigen_coords(u, sp, rho, g, u.n_time());
    double acc = 0.0;
    for (int l = 1; l <= u.n_time(); ++l) {
        const double wl = 1.0 + std::pow(double(l), 2.0 * s);
        for (int j = 0; j < sp.J; ++j)
            acc += 2.0 * wl * (sp.lambdas(j) + sp.shift_M) * std::norm(E(j, l - 1));
    }
    return std::sqrt(acc);
}

}  // namespace ebbeam
