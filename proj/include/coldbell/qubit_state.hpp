// qubit_state.hpp: d-qubit density matrices, Pauli matrices and basis-index helpers
//
// Basis convention: index i = (i_1 .. i_d) with qubit 1 the most significant bit,
// i_j = 1 the excited state |1>. The Pauli z matrix satisfies sigma_z|1> = +|1>,
// so in the ordered basis (|0>, |1>) it reads diag(-1, +1).

#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coldbell {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Bitmask over d qubits, qubit 1 in the most significant position.
using BasisIndex = std::uint32_t;

inline constexpr int kMaxQubits = 12;

/// Occupation (0 or 1) of qubit `q` (0-based, q = 0 is the leftmost qubit).
constexpr int qubit_bit(BasisIndex i, int q, int qubits) noexcept {
    return static_cast<int>((i >> (qubits - 1 - q)) & 1u);
}

/// Eigenvalue of sigma_z on qubit q for basis state i: 2 i_q - 1.
constexpr int z_value(BasisIndex i, int q, int qubits) noexcept {
    return 2 * qubit_bit(i, q, qubits) - 1;
}

inline BasisIndex basis_index(const std::vector<int>& bits) noexcept {
    BasisIndex i = 0;
    for (int b : bits) i = (i << 1) | static_cast<BasisIndex>(b & 1);
    return i;
}

// ------------------------------- Pauli matrices -----------------------------

enum class Pauli : int { I = 0, X = 1, Y = 2, Z = 3 };

/// Pauli matrix in the ordered basis (|0>, |1>), with sigma_z|1> = +|1> and
/// sigma_x sigma_y = i sigma_z.
inline Eigen::Matrix2cd pauli(Pauli p) {
    const cplx i1{0.0, 1.0};
    Eigen::Matrix2cd m;
    switch (p) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, i1, -i1, 0; break;
        case Pauli::Z: m << -1, 0, 0, 1; break;
    }
    return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

/// Tensor product of single-qubit operators, first factor acts on qubit 1.
inline Matrix kron_all(const std::vector<Matrix>& factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& f : factors) out = kron(out, f);
    return out;
}

// ------------------------------- QubitState ---------------------------------

struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-10;
    double positivity = 1e-8;
};

/// Density matrix of d qubits. Construction through `from_matrix` checks
/// Hermiticity, unit trace and positivity; `unchecked` skips the check for
/// intermediate results that are validated later.
class QubitState {
public:
    QubitState() = default;

    static QubitState from_matrix(Matrix rho, const StateTolerances& tol = {}) {
        QubitState s = unchecked(std::move(rho));
        s.validate(tol);
        return s;
    }

    static QubitState unchecked(Matrix rho) {
        const auto dim = rho.rows();
        if (dim != rho.cols() || dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim)))
            throw StateError("density matrix must be square with dimension 2^d, d >= 1");
        QubitState s;
        s.qubits_ = std::countr_zero(static_cast<std::uint64_t>(dim));
        s.rho_ = std::move(rho);
        return s;
    }

    int qubits() const noexcept { return qubits_; }
    Eigen::Index dim() const noexcept { return rho_.rows(); }
    const Matrix& matrix() const noexcept { return rho_; }
    cplx operator()(Eigen::Index i, Eigen::Index j) const { return rho_(i, j); }

    double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }
    double trace_error() const { return std::abs(rho_.trace() - cplx{1.0, 0.0}); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    void validate(const StateTolerances& tol = {}) const {
        if (hermiticity_error() > tol.hermiticity) throw StateError("density matrix is not Hermitian");
        if (trace_error() > tol.trace) throw StateError("density matrix does not have unit trace");
        if (min_eigenvalue() < -tol.positivity) throw StateError("density matrix is not positive semidefinite");
    }

private:
    int qubits_ = 0;
    Matrix rho_;
};

/// Trace distance (1/2)||a - b||_1.
inline double trace_distance(const Matrix& a, const Matrix& b) {
    Matrix diff = a - b;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const QubitState& a, const QubitState& b) {
    return trace_distance(a.matrix(), b.matrix());
}

// ------------------------------- Common states -----------------------------

inline QubitState pure_state(const Vector& psi) {
    Vector n = psi / psi.norm();
    return QubitState::unchecked(n * n.adjoint());
}

/// |+ ... +> with |+> = (|0> + |1>)/sqrt(2).
inline QubitState plus_state(int qubits) {
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    return QubitState::unchecked(Matrix::Constant(dim, dim, cplx{1.0 / static_cast<double>(dim), 0.0}));
}

/// (|0..0> + |1..1>)/sqrt(2).
inline QubitState ghz_state(int qubits) {
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    Vector psi = Vector::Zero(dim);
    psi(0) = psi(dim - 1) = 1.0;
    return pure_state(psi);
}

inline QubitState basis_state(int qubits, BasisIndex i) {
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    Matrix rho = Matrix::Zero(dim, dim);
    rho(i, i) = 1.0;
    return QubitState::unchecked(std::move(rho));
}

inline QubitState maximally_mixed(int qubits) {
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    return QubitState::unchecked(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

/// (|00> + |11>)/sqrt(2).
inline QubitState bell_phi_plus() { return ghz_state(2); }

}  // namespace coldbell
