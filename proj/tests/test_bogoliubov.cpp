#include "coldbell/bogoliubov.hpp"
#include "coldbell/exact.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace coldbell;

namespace {

Model ring_model(int m, int n, double un, std::vector<int> sites, double eta, double omega0 = 1.0) {
    LatticeConfig l;
    l.sites = m;
    l.bosons = n;
    l.interaction = un / n;
    ImpurityConfig imp;
    imp.sites = std::move(sites);
    imp.coupling = eta;
    imp.splitting = omega0;
    return validate_config(l, imp);
}

}  // namespace

TEST(Dephasing, BasicProperties) {
    const BogoliubovSolution sol(ring_model(5, 100, 2.0, {1, 2, 4}, 0.1));
    for (double t : {0.0, 0.7, 3.1, 11.0}) {
        for (BasisIndex i = 0; i < 8; ++i) {
            EXPECT_EQ(sol.dephasing(i, i, t), 0.0);
            for (BasisIndex j = 0; j < 8; ++j) {
                EXPECT_NEAR(sol.dephasing(i, j, t), sol.dephasing(j, i, t), 1e-15);
                EXPECT_GE(sol.dephasing(i, j, t), 0.0);
                if (t == 0.0) EXPECT_EQ(sol.dephasing(i, j, t), 0.0);
            }
        }
    }
}

TEST(Dephasing, SingleImpurityClosedForm) {
    // one qubit: gamma_01 = sum_k nu_k sin^2(omega_k t / 2)
    const Model m = ring_model(6, 60, 1.0, {3}, 0.2);
    const BogoliubovSolution sol(m);
    const double t = 2.3, M = 6.0;
    double ref = 0.0;
    for (int q = 1; q < 6; ++q) {
        const double k = 2.0 * std::numbers::pi * q / M;
        const double eps = 4.0 * std::pow(std::sin(k / 2.0), 2);
        const double w = std::sqrt(eps * eps + 2.0 * m.lattice.interaction * m.density * eps);
        ref += 2.0 * 0.04 * m.density * eps / (w * w * w * M) * std::pow(std::sin(w * t / 2.0), 2);
    }
    EXPECT_NEAR(sol.dephasing(0, 1, t), ref, 1e-14);
}

TEST(Dephasing, RateMatchesFiniteDifference) {
    const BogoliubovSolution sol(ring_model(5, 200, 2.0, {1, 3}, 0.07));
    for (double t : {0.4, 1.9, 6.6}) {
        for (auto [i, j] : {std::pair<BasisIndex, BasisIndex>{0, 3}, {1, 2}, {0, 1}}) {
            const double h = 1e-5;
            const double fd = (sol.dephasing(i, j, t + h) - sol.dephasing(i, j, t - h)) / (2.0 * h);
            EXPECT_NEAR(sol.dephasing_rate(i, j, t), fd, 1e-8);
        }
    }
}

TEST(Dephasing, ThreeSiteRingIsPeriodic) {
    const BogoliubovSolution sol(ring_model(3, 30, 2.0, {1, 2, 3}, 0.1));
    const double w = sol.modes().front().omega;
    for (int n = 1; n <= 3; ++n)
        for (BasisIndex i = 0; i < 8; ++i)
            for (BasisIndex j = 0; j < 8; ++j) EXPECT_NEAR(sol.dephasing(i, j, 2.0 * n * std::numbers::pi / w), 0.0, 1e-14);
}

TEST(Phase, RingOverlapTermVanishes) {
    const BogoliubovSolution sol(ring_model(7, 70, 2.0, {1, 2, 5}, 0.1));
    for (double t : {0.5, 3.0, 17.0})
        for (BasisIndex i = 0; i < 8; ++i)
            for (BasisIndex j = 0; j < 8; ++j) EXPECT_NEAR(sol.overlap_phase(i, j, t), 0.0, 1e-13);
}

TEST(Phase, ZZCoefficientsAreSymmetric) {
    const BogoliubovSolution sol(ring_model(6, 60, 2.0, {1, 2, 5}, 0.1));
    for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 3; ++m) EXPECT_NEAR(sol.zz_coefficient(j, m, 4.2), sol.zz_coefficient(m, j, 4.2), 1e-15);
}

TEST(Evolution, ZeroCouplingIsFreePrecession) {
    const double omega0 = 1.7, t = 3.3;
    const BogoliubovSolution sol(ring_model(4, 40, 2.0, {1, 2}, 0.0, omega0));
    const QubitState rho0 = plus_state(2);
    const QubitState rho = sol.evolve(rho0, t);
    for (BasisIndex i = 0; i < 4; ++i)
        for (BasisIndex j = 0; j < 4; ++j) {
            const double de = 0.5 * omega0 * ((z_value(i, 0, 2) + z_value(i, 1, 2)) - (z_value(j, 0, 2) + z_value(j, 1, 2)));
            EXPECT_NEAR(std::abs(rho(i, j) - std::exp(cplx{0.0, -de * t}) * rho0(i, j)), 0.0, 1e-12);
        }
}

TEST(Evolution, OutputIsAValidStateWithFixedPopulations) {
    std::mt19937_64 rng(2);
    const BogoliubovSolution sol(ring_model(5, 500, 2.0, {1, 2, 3}, 0.05));
    for (int n = 0; n < 5; ++n) {
        const QubitState rho0 = QubitState::from_matrix(oracle::random_density(3, rng));
        const QubitState rho = sol.evolve(rho0, 1.5 * n + 0.2);
        EXPECT_NO_THROW(rho.validate());
        for (Eigen::Index i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(rho(i, i) - rho0(i, i)), 0.0, 1e-15);
    }
}

TEST(Evolution, UnitaryOnlyKeepsCoherenceMagnitudes) {
    const BogoliubovSolution sol(ring_model(5, 500, 2.0, {1, 5}, 0.2));
    const QubitState rho0 = plus_state(2);
    const QubitState u = sol.evolve(rho0, 6.0, true), full = sol.evolve(rho0, 6.0);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) {
            EXPECT_NEAR(std::abs(u(i, j)), std::abs(rho0(i, j)), 1e-14);
            EXPECT_NEAR(std::arg(u(i, j) * std::conj(full(i, j))), 0.0, 1e-12);
        }
}

TEST(Evolution, OverlapFormMatchesExponentForm) {
    std::mt19937_64 rng(9);
    const BogoliubovSolution sol(ring_model(5, 300, 2.0, {1, 2, 4}, 0.15));
    const QubitState rho0 = QubitState::from_matrix(oracle::random_density(3, rng));
    for (double t : {0.3, 2.2, 9.0})
        EXPECT_LT((sol.evolve(rho0, t).matrix() - sol.evolve_overlap_form(rho0, t).matrix()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Evolution, ApproachesExactSolverAtLargeN) {
    const Model m = ring_model(3, 40, 2.0, {1, 2, 3}, 0.03);
    const BogoliubovSolution sol(m);
    const ExactSolver exact(m);
    std::vector<double> times{0.0, 1.0, 2.5, 5.0};
    const auto ref = exact.evolve(plus_state(3), times);
    for (std::size_t n = 0; n < times.size(); ++n)
        EXPECT_LT(trace_distance(sol.evolve(plus_state(3), times[n]), ref[n]), 0.02) << "t=" << times[n];
}

TEST(Evolution, RejectsMismatchedState) {
    const BogoliubovSolution sol(ring_model(3, 30, 2.0, {1, 2}, 0.1));
    EXPECT_THROW(sol.evolve(plus_state(3), 1.0), std::invalid_argument);
}
