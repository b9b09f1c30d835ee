#include "coldbell/exact.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace coldbell;

namespace {

Model ring_model(int m, int n, double u, std::vector<int> sites, double eta, double omega0 = 1.0) {
    LatticeConfig l;
    l.sites = m;
    l.bosons = n;
    l.interaction = u;
    ImpurityConfig imp;
    imp.sites = std::move(sites);
    imp.coupling = eta;
    imp.splitting = omega0;
    return validate_config(l, imp);
}

/// Index of an occupation vector in the dense product space of oracle::DenseRing.
Eigen::Index dense_index(const std::vector<int>& n, int local) {
    Eigen::Index i = 0;
    for (int k : n) i = i * local + k;
    return i;
}

/// Reduced qubit states from the full qubit (x) gas evolution.
std::vector<Matrix> dense_reduced(const Model& m, const Matrix& rho0, const std::vector<double>& times) {
    const oracle::DenseRing ring(m.lattice.sites, m.lattice.bosons);
    const auto [e0, gs] = ring.ground(m.lattice.hopping, m.lattice.interaction);
    const Matrix H = oracle::total_hamiltonian(ring, m.lattice.hopping, m.lattice.interaction, m.impurities.splitting,
                                               m.impurities.coupling, m.impurities.sites);
    const Matrix full0 = kron(rho0, gs * gs.adjoint());
    std::vector<Matrix> out;
    for (double t : times) {
        const Matrix U = oracle::unitary(H, t);
        out.push_back(oracle::partial_trace_second(U * full0 * U.adjoint(), rho0.rows(), ring.dim()));
    }
    return out;
}

}  // namespace

TEST(FockBasis, DimensionAndOrdering) {
    EXPECT_EQ(fock_dimension(3, 20), 231.0);
    EXPECT_EQ(fock_dimension(2, 2), 3.0);
    const FockBasis b(3, 2);
    ASSERT_EQ(b.size(), 6u);
    EXPECT_EQ(b[0], (std::vector<int>{2, 0, 0}));
    EXPECT_EQ(b[5], (std::vector<int>{0, 0, 2}));
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.index_of(b[i]), i);
    EXPECT_EQ(b.index_of({1, 1, 1}), b.size());
    EXPECT_THROW(FockBasis(10, 100, 1000), ConfigError);
    EXPECT_THROW(FockBasis(1, 3), ConfigError);
}

TEST(BoseHubbard, MatchesDenseConstruction) {
    for (auto [m, n] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{4, 2}}) {
        const FockBasis basis(m, n);
        const Matrix Hs = Matrix(build_bh_hamiltonian(basis, 0.8, 0.3).cast<cplx>());
        const oracle::DenseRing ring(m, n);
        const Matrix Hd = ring.hamiltonian(0.8, 0.3);
        for (std::size_t r = 0; r < basis.size(); ++r)
            for (std::size_t c = 0; c < basis.size(); ++c)
                EXPECT_NEAR(std::abs(Hs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) -
                                     Hd(dense_index(basis[r], n + 1), dense_index(basis[c], n + 1))),
                            0.0, 1e-13)
                    << "M=" << m << " N=" << n;
    }
}

TEST(BoseHubbard, TwoSiteRingDoublesTheBond) {
    // one boson on two sites: hopping element -2J
    const FockBasis basis(2, 1);
    const Matrix H = Matrix(build_bh_hamiltonian(basis, 1.0, 0.0).cast<cplx>());
    EXPECT_NEAR(H(0, 1).real(), -2.0, 1e-15);
}

TEST(GroundState, LanczosMatchesDenseDiagonalisation) {
    for (auto [m, n, u] : {std::tuple{3, 6, 0.4}, std::tuple{4, 4, 0.0}, std::tuple{5, 3, 2.0}}) {
        const FockBasis basis(m, n);
        const auto H = build_bh_hamiltonian(basis, 1.0, u);
        const auto gs = ground_state(H);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(H)};
        EXPECT_NEAR(gs.energy, es.eigenvalues()(0), 1e-9);
        EXPECT_NEAR(gs.state.norm(), 1.0, 1e-12);
        EXPECT_LT((H * gs.state - gs.energy * gs.state).norm(), 1e-8);
    }
}

TEST(Propagation, MatchesDenseExponential) {
    const FockBasis basis(3, 8);
    const auto H = build_bh_hamiltonian(basis, 1.0, 0.25);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Vector psi(static_cast<Eigen::Index>(basis.size()));
    for (auto& v : psi) v = {g(rng), g(rng)};
    psi.normalize();
    const Matrix Hd = Matrix(H.cast<cplx>());
    for (double t : {0.0, 0.3, 4.0, 25.0}) {
        const Vector exact = oracle::unitary(Hd, t) * psi;
        const Vector krylov = propagate(H, psi, t);
        EXPECT_LT((exact - krylov).norm(), 1e-8) << "t=" << t;
    }
}

TEST(ExactSolver, AgreesWithFullTensorEvolution) {
    struct Case {
        int m, n;
        double u;
        std::vector<int> sites;
        double eta;
    };
    std::mt19937_64 rng(5);
    for (const Case& c : {Case{2, 2, 0.5, {1}, 0.3}, Case{3, 2, 1.0, {1, 3}, 0.4}, Case{3, 3, 0.2, {1, 2, 3}, 0.25}}) {
        const Model model = ring_model(c.m, c.n, c.u, c.sites, c.eta, 0.7);
        const int d = model.qubits();
        const Matrix rho0 = oracle::random_density(d, rng);
        const std::vector<double> times{0.0, 0.5, 2.0, 7.5};
        const auto ref = dense_reduced(model, rho0, times);
        const auto got = ExactSolver(model).evolve(QubitState::from_matrix(rho0), times);
        for (std::size_t n = 0; n < times.size(); ++n)
            EXPECT_LT(trace_distance(got[n].matrix(), ref[n]), 1e-8) << "M=" << c.m << " t=" << times[n];
    }
}

TEST(ExactSolver, PopulationsAndHermiticityArePreserved) {
    const Model model = ring_model(3, 10, 0.2, {1, 2, 3}, 0.3);
    const ExactSolver solver(model);
    std::vector<double> times;
    for (int i = 0; i <= 20; ++i) times.push_back(0.5 * i);
    double norm_drift = 0.0;
    const auto states = solver.evolve(plus_state(3), times, [&](std::size_t, const std::vector<Vector>& psi) {
        for (const auto& v : psi) norm_drift = std::max(norm_drift, std::abs(v.norm() - 1.0));
    });
    EXPECT_LT(norm_drift, 1e-8);
    for (const auto& s : states) {
        for (Eigen::Index i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(s(i, i) - 0.125), 0.0, 1e-10);
        EXPECT_LT(s.hermiticity_error(), 1e-10);
        EXPECT_GT(s.min_eigenvalue(), -1e-8);
    }
}

TEST(ExactSolver, ZeroCouplingIsFreePrecession) {
    const Model model = ring_model(3, 6, 0.3, {1, 3}, 0.0, 1.3);
    const ExactSolver solver(model);
    const QubitState rho0 = plus_state(2);
    const double t = 2.7;
    const QubitState rho = solver.evolve(rho0, t);
    for (BasisIndex i = 0; i < 4; ++i)
        for (BasisIndex j = 0; j < 4; ++j) {
            const double de = solver.qubit_energy(i) - solver.qubit_energy(j);
            EXPECT_NEAR(std::abs(rho(i, j) - std::exp(cplx{0.0, -de * t}) * rho0(i, j)), 0.0, 1e-10);
        }
}

TEST(ExactSolver, ZeroTimeReturnsInitialState) {
    const Model model = ring_model(3, 5, 0.4, {2}, 0.5);
    const QubitState rho0 = plus_state(1);
    EXPECT_LT(trace_distance(ExactSolver(model).evolve(rho0, 0.0), rho0), 1e-14);
}

TEST(ExactSolver, RejectsBadInput) {
    const Model model = ring_model(3, 5, 0.4, {2}, 0.5);
    const ExactSolver solver(model);
    EXPECT_THROW(solver.evolve(plus_state(2), 1.0), std::invalid_argument);
    const std::vector<double> backwards{1.0, 0.5};
    EXPECT_THROW(solver.evolve(plus_state(1), backwards), std::invalid_argument);
    ExactOptions small;
    small.max_basis_size = 10;
    EXPECT_THROW(ExactSolver(model, small), ConfigError);
}
