#include "coldbell/bogoliubov.hpp"
#include "coldbell/continuum.hpp"

#include <gtest/gtest.h>

using namespace coldbell;

namespace {

/// Discrete ring with n0 = 1 whose mode sum approximates the continuum integrals.
BogoliubovSolution large_ring(int sites, const ContinuumConfig& c, std::vector<int> impurity_sites) {
    LatticeConfig l;
    l.sites = sites;
    l.bosons = sites;
    l.interaction = c.interaction;
    l.hopping = c.hopping;
    ImpurityConfig imp;
    imp.sites = std::move(impurity_sites);
    imp.coupling = c.coupling;
    imp.splitting = c.splitting;
    return BogoliubovSolution(validate_config(l, imp));
}

}  // namespace

TEST(Continuum, RatesVanishAtZeroTime) {
    const ContinuumConfig c;
    EXPECT_EQ(gamma0(0.0, c), 0.0);
    EXPECT_EQ(gamma_cross(0.0, c, 1, 2), 0.0);
    EXPECT_EQ(zz_coefficient_continuum(0.0, c, 1, 2), 0.0);
}

TEST(Continuum, CollectiveRatesSumToFourGammaZero) {
    const ContinuumConfig c;
    for (double t : {1.0, 50.0, 400.0, 1200.0}) {
        const auto r = gamma_pm(t, c, 1, 2);
        EXPECT_NEAR(r.plus + r.minus, 4.0 * r.gamma0, 1e-8);
        EXPECT_GT(r.plus, 2.0 * r.gamma0);
        EXPECT_LT(r.minus, 2.0 * r.gamma0);
    }
}

TEST(Continuum, LargeRingModeSumConverges) {
    ContinuumConfig c;
    const int M = 40000;
    c.cutoff = 1.0 / M;
    const auto sol = large_ring(M, c, {1, 2});
    for (double t : {5.0, 40.0}) {
        const auto r = gamma_pm(t, c, 1, 2);
        EXPECT_NEAR(sol.dephasing(0b10, 0b00, t), r.gamma0, 2e-3 * r.gamma0) << t;
        EXPECT_NEAR(sol.dephasing(0b11, 0b00, t), r.plus, 2e-3 * r.plus) << t;
        EXPECT_NEAR(sol.dephasing(0b10, 0b01, t), r.minus, 2e-3 * r.plus) << t;
        const double c12 = zz_coefficient_continuum(t, c, 1, 2);
        EXPECT_NEAR(sol.zz_coefficient(0, 1, t), c12, 2e-3 * std::abs(c12)) << t;
    }
}

TEST(Continuum, GeneralExponentMatchesCollectiveRates) {
    const ContinuumConfig c;
    const std::vector<int> sites{1, 3};
    const double t = 120.0;
    const auto r = gamma_pm(t, c, 1, 3);
    for (BasisIndex i = 0; i < 4; ++i)
        for (BasisIndex j = 0; j < 4; ++j)
            EXPECT_NEAR(gamma_continuum(i, j, t, c, sites), two_impurity_exponent(i, j, r), 1e-9 * r.plus);
}

TEST(Continuum, TighterToleranceChangesLittle) {
    ContinuumConfig c, fine;
    fine.relative_tolerance = 1e-13;
    fine.panels_per_decade = 12;
    for (double t : {10.0, 800.0}) EXPECT_NEAR(gamma0(t, c), gamma0(t, fine), 1e-9 * gamma0(t, fine));
}

TEST(Continuum, ReducedStateStructure) {
    const ContinuumConfig c;
    const QubitState rho0 = plus_state(2);
    for (double t : {0.0, 30.0, 700.0}) {
        const QubitState rho = reduced_state_two_impurity_continuum(rho0, t, c, 1, 2);
        EXPECT_NO_THROW(rho.validate());
        for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(rho(i, i).real(), 0.25, 1e-15);
        const auto r = gamma_pm(t, c, 1, 2);
        EXPECT_NEAR(std::abs(rho(0, 3)), 0.25 * std::exp(-r.plus), 1e-12);
        EXPECT_NEAR(std::abs(rho(1, 2)), 0.25 * std::exp(-r.minus), 1e-12);
        EXPECT_NEAR(std::abs(rho(0, 1)), 0.25 * std::exp(-r.gamma0), 1e-12);
        const QubitState u = reduced_state_two_impurity_continuum(rho0, t, c, 1, 2, true);
        EXPECT_NEAR(std::abs(u(1, 2)), 0.25, 1e-14);
    }
    EXPECT_NEAR(trace_distance(reduced_state_two_impurity_continuum(rho0, 0.0, c, 1, 2), rho0), 0.0, 1e-15);
}

TEST(Continuum, PhaseMatchesLargeRing) {
    ContinuumConfig c;
    const int M = 40000;
    c.cutoff = 1.0 / M;
    const auto sol = large_ring(M, c, {1, 2});
    const QubitState rho0 = plus_state(2);
    const double t = 20.0;
    EXPECT_LT(trace_distance(sol.evolve(rho0, t), reduced_state_two_impurity_continuum(rho0, t, c, 1, 2)), 1e-3);
}

TEST(Continuum, RejectsInvalidInput) {
    ContinuumConfig c;
    c.cutoff = 0.0;
    EXPECT_THROW(gamma0(1.0, c), ConfigError);
    c = {};
    c.interaction = -1.0;
    EXPECT_THROW(gamma0(1.0, c), ConfigError);
    c = {};
    EXPECT_THROW(reduced_state_two_impurity_continuum(plus_state(3), 1.0, c, 1, 2), std::invalid_argument);
    EXPECT_THROW(reduced_state_two_impurity_continuum(plus_state(2), 1.0, c, 2, 2), ConfigError);
}
