#include "coldbell/qubit_state.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace coldbell;

TEST(Pauli, ProductRules) {
    const cplx i1{0.0, 1.0};
    const auto X = pauli(Pauli::X), Y = pauli(Pauli::Y), Z = pauli(Pauli::Z);
    EXPECT_LT((X * Y - i1 * Z).norm(), 1e-15);
    EXPECT_LT((Y * Z - i1 * X).norm(), 1e-15);
    EXPECT_LT((Z * X - i1 * Y).norm(), 1e-15);
    for (auto p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        EXPECT_LT((pauli(p) * pauli(p) - Eigen::Matrix2cd::Identity()).norm(), 1e-15);
        EXPECT_LT(std::abs(pauli(p).trace()), 1e-15);
    }
}

TEST(Pauli, ZActsAsPlusOneOnExcitedState) {
    const auto Z = pauli(Pauli::Z);
    EXPECT_DOUBLE_EQ(Z(1, 1).real(), 1.0);
    EXPECT_DOUBLE_EQ(Z(0, 0).real(), -1.0);
}

TEST(BasisIndex, FirstQubitIsMostSignificant) {
    EXPECT_EQ(basis_index({1, 0, 0}), 4u);
    EXPECT_EQ(basis_index({0, 1, 1}), 3u);
    for (BasisIndex i = 0; i < 8; ++i) {
        std::vector<int> bits;
        for (int q = 0; q < 3; ++q) bits.push_back(qubit_bit(i, q, 3));
        EXPECT_EQ(basis_index(bits), i);
        for (int q = 0; q < 3; ++q) EXPECT_EQ(z_value(i, q, 3), 2 * bits[static_cast<std::size_t>(q)] - 1);
    }
}

TEST(Kron, MatchesBlockDefinition) {
    const Matrix a = pauli(Pauli::X), b = pauli(Pauli::Z);
    const Matrix k = kron(a, b);
    ASSERT_EQ(k.rows(), 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) EXPECT_EQ(k(r, c), a(r / 2, c / 2) * b(r % 2, c % 2));
}

TEST(QubitState, ValidationRejectsBadMatrices) {
    Matrix notHermitian = Matrix::Identity(2, 2) / 2.0;
    notHermitian(0, 1) = 0.3;
    EXPECT_THROW(QubitState::from_matrix(notHermitian), StateError);
    EXPECT_THROW(QubitState::from_matrix(Matrix::Identity(2, 2)), StateError);
    Matrix negative(2, 2);
    negative << 1.2, 0.0, 0.0, -0.2;
    EXPECT_THROW(QubitState::from_matrix(negative), StateError);
    EXPECT_THROW(QubitState::from_matrix(Matrix::Identity(3, 3) / 3.0), StateError);
    EXPECT_NO_THROW(QubitState::from_matrix(Matrix::Identity(4, 4) / 4.0));
}

TEST(QubitState, StandardStatesAreValid) {
    for (int d = 1; d <= 4; ++d) {
        for (const auto& s : {plus_state(d), ghz_state(d), maximally_mixed(d), basis_state(d, 1)}) {
            EXPECT_NO_THROW(s.validate());
            EXPECT_EQ(s.qubits(), d);
        }
    }
    const auto plus = plus_state(2);
    const Matrix X2 = kron(pauli(Pauli::X), pauli(Pauli::X));
    EXPECT_NEAR(oracle::expectation(plus.matrix(), X2), 1.0, 1e-15);
}

TEST(TraceDistance, KnownValues) {
    EXPECT_NEAR(trace_distance(basis_state(2, 0), basis_state(2, 3)), 1.0, 1e-14);
    EXPECT_NEAR(trace_distance(ghz_state(3), ghz_state(3)), 0.0, 1e-14);
    EXPECT_NEAR(trace_distance(basis_state(1, 0), maximally_mixed(1)), 0.5, 1e-14);
}

TEST(TraceDistance, MetricProperties) {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 20; ++n) {
        const Matrix a = oracle::random_density(2, rng), b = oracle::random_density(2, rng), c = oracle::random_density(2, rng);
        const double ab = trace_distance(a, b);
        EXPECT_NEAR(ab, trace_distance(b, a), 1e-13);
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0 + 1e-12);
        EXPECT_LE(ab, trace_distance(a, c) + trace_distance(c, b) + 1e-12);
    }
}
