#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ebbeam/eigensolver.hpp>

#include "oracles.hpp"

using namespace ebbeam;

namespace {
constexpr double kA = 0.05;

CoefficientProfile constant_profile(int n) { return build_profile(GeneratorPair::zero(n)); }
CoefficientProfile sine_profile(int n) {
    return build_profile(GeneratorPair::sine_pair(n, kA));
}
}  // namespace

TEST_CASE("constant-coefficient beam spectrum is j^4") {
    auto prob = EigenProblem::make(constant_profile(1024));
    auto sp = solve_spectrum(prob, 10);
    for (int j = 1; j <= 10; ++j) {
        const double exact = std::pow(double(j), 4.0);
        CHECK(std::abs(sp.lambdas(j - 1) - exact) / exact < 1e-4);
    }
    // mu spacing 2j+1
    for (int j = 1; j < 10; ++j)
        CHECK(std::abs(std::abs(sp.mus[j] - sp.mus[j - 1]) - (2.0 * j + 1.0)) < 1e-3);
    CHECK(sp.shift_M == doctest::Approx(1.0));
}

TEST_CASE("operator application on sine samples") {
    auto prof = constant_profile(256);
    SineBasis basis = SineBasis::make(prof.grid, 32);
    for (int j : {1, 3, 5}) {
        Eigen::VectorXd u = (double(j) * prof.grid.x.array()).sin();
        Eigen::VectorXd out =
            basis.apply_operator(prof.p, Eigen::VectorXd::Zero(prof.grid.n), u);
        Eigen::VectorXd ref = std::pow(double(j), 4.0) * u;
        const double rel = (out - ref).norm() / ref.norm();
        CHECK(rel < 1.0 / (256.0 * 256.0));
    }
}

TEST_CASE("assembled matrices are symmetric and potential shifts linearly") {
    auto prof = sine_profile(512);
    auto prob0 = EigenProblem::make(prof);
    auto [S0, M0] = assemble(prob0, 48);
    CHECK((S0 - S0.transpose()).cwiseAbs().maxCoeff() <=
          1e-12 * S0.cwiseAbs().maxCoeff());
    CHECK((M0 - M0.transpose()).cwiseAbs().maxCoeff() <=
          1e-12 * M0.cwiseAbs().maxCoeff());

    const double c = 0.37;
    auto probc =
        EigenProblem::make(prof, Eigen::VectorXd::Constant(prof.grid.n, c));
    auto [Sc, Mc] = assemble(probc, 48);
    // stiffness(g=c) = stiffness(0) - c * unit-mass block, entrywise
    auto prob_unit = EigenProblem::make(constant_profile(512));
    auto [Su, Mu] = assemble(prob_unit, 48);
    CHECK((Sc - (S0 - c * Mu)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("constant potential shifts the constant-profile spectrum exactly") {
    auto prof = constant_profile(1024);
    const double c = 1e-3;
    auto sp0 = solve_spectrum(EigenProblem::make(prof), 8);
    auto spc = solve_spectrum(
        EigenProblem::make(prof, Eigen::VectorXd::Constant(prof.grid.n, c)), 8);
    for (int j = 0; j < 8; ++j)
        CHECK(std::abs((sp0.lambdas(j) - spc.lambdas(j)) - c) < 1e-6);
}

TEST_CASE("refinement oracle for the sine-pair spectrum") {
    auto sp_main = solve_spectrum(EigenProblem::make(sine_profile(1024)), 20);
    auto sp_ref = solve_spectrum(EigenProblem::make(sine_profile(4096)), 40);
    for (int j = 0; j < 20; ++j)
        CHECK(std::abs(sp_main.lambdas(j) - sp_ref.lambdas(j)) /
                  std::abs(sp_ref.lambdas(j)) <
              1e-3);
}

TEST_CASE("resolution guard") {
    auto prob = EigenProblem::make(constant_profile(128));
    CHECK_THROWS_AS(solve_spectrum(prob, 17), ResolutionExceeded);
}

TEST_CASE("rho-orthonormality of eigenfunctions") {
    auto prof = sine_profile(512);
    auto sp = solve_spectrum(EigenProblem::make(prof), 12);
    const Eigen::VectorXd w = prof.grid.weights();
    for (int i = 0; i < 12; ++i)
        for (int j = i; j < 12; ++j) {
            const double ip = (w.array() * prof.rho.array() *
                               sp.eigenfunctions.col(i).array() *
                               sp.eigenfunctions.col(j).array())
                                  .sum();
            CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
}

TEST_CASE("asymptotic coefficients") {
    SUBCASE("identity generators vanish") {
        auto prof = constant_profile(256);
        auto asym =
            asymptotic_coefficients(prof, Eigen::VectorXd::Zero(prof.grid.n), 6);
        CHECK(std::abs(asym.upsilon0) < 1e-14);
        CHECK(std::abs(asym.upsilon1) < 1e-14);
        CHECK(asym.varrho.cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("constant potential reduction") {
        auto prof = constant_profile(513);
        const double c = 1e-6;
        auto asym = asymptotic_coefficients(
            prof, Eigen::VectorXd::Constant(prof.grid.n, c), 6);
        CHECK(std::abs(asym.upsilon0) < 1e-14);
        // implemented convention: upsilon1 = -c + c^2/2 (the varrho0 term);
        // equals -c at first order
        CHECK(asym.upsilon1 == doctest::Approx(-c + c * c / 2.0).epsilon(1e-12));
        CHECK(std::abs(asym.upsilon1 + c) < c * c);
        CHECK(asym.varrho.cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("sine-pair upsilon0 against the dense Simpson oracle") {
        auto prof = sine_profile(4097);
        auto asym =
            asymptotic_coefficients(prof, Eigen::VectorXd::Zero(prof.grid.n), 6);
        auto f_base = [](double x) { return std::exp(2.0 * kA * (1.0 - std::cos(x))); };
        const double p0 =
            std::pow(oracle::simpson(f_base, 100001) / oracle::kPi, 4.0);
        auto integrand = [&](double x) {
            const double s = std::sin(x);
            const double zeta = f_base(x) / std::pow(p0, 0.25);
            return kA * kA * s * s / zeta;  // x_frak / zeta, d-boundary terms vanish
        };
        const double u0_ref = oracle::simpson(integrand, 100001) / oracle::kPi;
        CHECK(std::abs(asym.upsilon0 - u0_ref) < 1e-6);
    }
    SUBCASE("varrho decays like 1/j") {
        auto prof = sine_profile(2049);
        auto asym =
            asymptotic_coefficients(prof, Eigen::VectorXd::Zero(prof.grid.n), 32);
        // |varrho_j| <= C/j with C fitted from the first modes
        double C = 0.0;
        for (int j = 1; j <= 8; ++j)
            C = std::max(C, std::abs(asym.varrho(j - 1)) * j);
        for (int j = 9; j <= 32; ++j)
            CHECK(std::abs(asym.varrho(j - 1)) <= 2.0 * C / j + 1e-12);
    }
    SUBCASE("x_frak is pointwise nonnegative") {
        auto gen = oracle::rng(7);
        Grid g = Grid::uniform(257);
        for (int t = 0; t < 10; ++t) {
            Eigen::VectorXd a = Eigen::VectorXd::Zero(g.n), b = Eigen::VectorXd::Zero(g.n);
            std::uniform_real_distribution<double> u(-0.2, 0.2);
            for (int k = 1; k <= 2; ++k) {
                a += u(gen) * (double(k) * g.x.array()).sin().matrix();
                b += u(gen) * (double(k) * g.x.array()).sin().matrix();
            }
            auto prof = build_profile(GeneratorPair::from_samples(a, b));
            auto asym =
                asymptotic_coefficients(prof, Eigen::VectorXd::Zero(g.n), 2);
            CHECK(asym.x_frak.minCoeff() >= -1e-14);
        }
    }
}

TEST_CASE("eigenvalue derivative") {
    SUBCASE("zero direction") {
        auto prof = constant_profile(512);
        auto sp = solve_spectrum(EigenProblem::make(prof), 6);
        CHECK(eigenvalue_derivative(sp, 3, prof.grid,
                                    Eigen::VectorXd::Zero(prof.grid.n)) == 0.0);
    }
    SUBCASE("unit direction on the constant profile gives -1") {
        auto prof = constant_profile(1024);
        auto sp = solve_spectrum(EigenProblem::make(prof), 8);
        for (int j = 1; j <= 8; ++j)
            CHECK(eigenvalue_derivative(sp, j, prof.grid,
                                        Eigen::VectorXd::Ones(prof.grid.n)) ==
                  doctest::Approx(-1.0).epsilon(1e-8));
    }
    SUBCASE("matches central differences on the sine-pair profile, h = cos x") {
        // The finite-difference quotient carries a cancellation floor of
        // eps * ||S|| / (2 delta); the spec's delta = 1e-6 is checked against
        // that floor, and a larger step checks the 1e-5 relative target.
        auto prof = sine_profile(513);
        Eigen::VectorXd h = prof.grid.x.array().cos();
        auto base = EigenProblem::make(prof);
        base.basis_size = 24;
        auto sp = solve_spectrum(base, 6);
        auto lam_at = [&](double t) {
            auto pr = EigenProblem::make(prof, (t * h).eval());
            pr.basis_size = 24;
            return solve_spectrum(pr, 6).lambdas;
        };
        const double norm_s = std::pow(24.0, 4.0) * kPi / 2.0;
        for (double delta : {1e-6, 1e-4}) {
            const double floor = 8.0 * 2.2e-16 * norm_s / (2.0 * delta);
            auto lp = lam_at(delta), lm = lam_at(-delta);
            for (int j = 1; j <= 6; ++j) {
                const double fd = (lp(j - 1) - lm(j - 1)) / (2.0 * delta);
                const double an = eigenvalue_derivative(sp, j, prof.grid, h);
                CHECK(std::abs(fd - an) <= std::max(1e-5 * std::abs(an), floor));
            }
        }
    }
    SUBCASE("twenty random (j, h) probes against central differences") {
        auto prof = sine_profile(513);
        auto base = EigenProblem::make(prof);
        base.basis_size = 24;
        auto sp = solve_spectrum(base, 10);
        auto gen = oracle::rng(123);
        std::uniform_int_distribution<int> pick_j(1, 10);
        const double delta = 1e-4;
        for (int t = 0; t < 20; ++t) {
            const int j = pick_j(gen);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            // a unit-scale mean keeps the derivative away from zero
            Eigen::VectorXd h =
                Eigen::VectorXd::Constant(prof.grid.n, u(gen) < 0 ? -1.0 : 1.0);
            for (int k = 1; k <= 4; ++k)
                h += u(gen) * (double(k) * prof.grid.x.array()).cos().matrix();
            auto pp = EigenProblem::make(prof, (delta * h).eval());
            auto pm = EigenProblem::make(prof, (-delta * h).eval());
            pp.basis_size = pm.basis_size = 24;
            auto spp = solve_spectrum(pp, 10);
            auto spm = solve_spectrum(pm, 10);
            const double fd = (spp.lambdas(j - 1) - spm.lambdas(j - 1)) / (2.0 * delta);
            const double an = eigenvalue_derivative(sp, j, prof.grid, h);
            CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
        }
    }
    SUBCASE("index guard") {
        auto prof = constant_profile(512);
        auto sp = solve_spectrum(EigenProblem::make(prof), 4);
        CHECK_THROWS_AS(
            eigenvalue_derivative(sp, 5, prof.grid, Eigen::VectorXd::Ones(prof.grid.n)),
            IndexOutOfRange);
    }
}

TEST_CASE("eigenvalue Lipschitz bound in the potential") {
    auto prof = sine_profile(513);
    auto gen = oracle::rng(99);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (int t = 0; t < 5; ++t) {
        Eigen::VectorXd g1 = Eigen::VectorXd::Zero(prof.grid.n),
                        g2 = Eigen::VectorXd::Zero(prof.grid.n);
        for (int k = 1; k <= 3; ++k) {
            g1 += u(gen) * (double(k) * prof.grid.x.array()).cos().matrix();
            g2 += u(gen) * (double(k) * prof.grid.x.array()).cos().matrix();
        }
        auto s1 = solve_spectrum(EigenProblem::make(prof, g1), 10);
        auto s2 = solve_spectrum(EigenProblem::make(prof, g2), 10);
        const double dist = (g1 - g2).cwiseAbs().maxCoeff();
        for (int j = 0; j < 10; ++j)
            CHECK(std::abs(s1.lambdas(j) - s2.lambdas(j)) <= dist + 1e-6);
    }
}

TEST_CASE("asymptotics verification") {
    SUBCASE("constant profile residuals vanish") {
        auto prof = constant_profile(1024);
        auto sp = solve_spectrum(EigenProblem::make(prof), 16);
        auto asym =
            asymptotic_coefficients(prof, Eigen::VectorXd::Zero(prof.grid.n), 16);
        auto rep = verify_asymptotics(sp, asym, 4, 12, prof.grid.n);
        CHECK(rep.r.cwiseAbs().maxCoeff() < 1e-6);
        CHECK(rep.below_floor);
    }
    SUBCASE("sine-pair decay slope (reduced-size build of the shape check)") {
        auto prof = sine_profile(2049);
        auto sp = solve_spectrum(EigenProblem::make(prof), 32);
        auto asym =
            asymptotic_coefficients(prof, Eigen::VectorXd::Zero(prof.grid.n), 32);
        auto rep = verify_asymptotics(sp, asym, 8, 24, prof.grid.n);
        CHECK(rep.slope <= -0.8);
        CHECK_FALSE(rep.discretization_flag);
    }
    SUBCASE("discretization-regime flag") {
        auto prof = constant_profile(256);
        auto sp = solve_spectrum(EigenProblem::make(prof), 16);
        auto asym =
            asymptotic_coefficients(prof, Eigen::VectorXd::Zero(prof.grid.n), 16);
        auto rep = verify_asymptotics(sp, asym, 4, 16, prof.grid.n);
        CHECK(rep.discretization_flag);
    }
}
