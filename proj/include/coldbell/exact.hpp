// exact.hpp: Exact zero-temperature dynamics of impurity qubits on a Bose-Hubbard ring
//
// The total Hamiltonian conserves every sigma_z of the impurities, so the gas
// evolves independently in each qubit configuration i under
//     H_i = H_BH + eta * sum_{j : i_j = 1} n_{l_j}.
// The reduced qubit state follows from the overlaps of the 2^d conditional gas
// states:  rho_ij(t) = exp(-i (E_i - E_j) t) <psi_j(t)|psi_i(t)> rho_ij(0).

#pragma once

#include "coldbell/model.hpp"
#include "coldbell/parallel.hpp"
#include "coldbell/qubit_state.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace coldbell {

using SparseReal = Eigen::SparseMatrix<double>;
using SparseComplex = Eigen::SparseMatrix<cplx>;

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------- Fock basis ---------------------------------

/// Number of ways to place N bosons on M sites, C(N+M-1, M-1), as a double so
/// that oversized requests can be rejected before enumeration.
inline double fock_dimension(int sites, int bosons) {
    return std::round(std::exp(std::lgamma(bosons + sites) - std::lgamma(bosons + 1.0) - std::lgamma(sites)));
}

/// Fixed-N occupation basis, ordered lexicographically with n_1 descending:
/// (N,0,..,0), (N-1,1,0,..), ..., (0,..,0,N).
class FockBasis {
public:
    using Occupation = std::vector<int>;

    FockBasis(int sites, int bosons, std::size_t max_states = 2'000'000) : sites_(sites), bosons_(bosons) {
        if (sites < 2) throw ConfigError("Fock basis needs at least 2 sites");
        if (bosons < 1) throw ConfigError("Fock basis needs at least 1 boson");
        const double size = fock_dimension(sites, bosons);
        if (size > static_cast<double>(max_states))
            throw ConfigError("Fock basis of " + std::to_string(size) + " states exceeds the bound of " +
                              std::to_string(max_states));
        states_.reserve(static_cast<std::size_t>(size));
        Occupation n(static_cast<std::size_t>(sites), 0);
        enumerate(0, bosons, n);
        for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
    }

    int sites() const noexcept { return sites_; }
    int bosons() const noexcept { return bosons_; }
    std::size_t size() const noexcept { return states_.size(); }
    const Occupation& operator[](std::size_t i) const { return states_[i]; }
    const std::vector<Occupation>& states() const noexcept { return states_; }

    /// Position of an occupation vector, or size() if it is not in the basis.
    std::size_t index_of(const Occupation& n) const {
        auto it = index_.find(n);
        return it == index_.end() ? size() : it->second;
    }

private:
    void enumerate(int site, int remaining, Occupation& n) {
        if (site == sites_ - 1) {
            n[static_cast<std::size_t>(site)] = remaining;
            states_.push_back(n);
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            n[static_cast<std::size_t>(site)] = k;
            enumerate(site + 1, remaining - k, n);
        }
    }

    int sites_;
    int bosons_;
    std::vector<Occupation> states_;
    std::map<Occupation, std::size_t> index_;
};

/// -J sum_j (a+_{j+1} a_j + h.c.) + (U/2) sum_j n_j (n_j - 1) on a ring with
/// a_{M+1} = a_1. For M = 2 the sum contains the bond (1,2) twice, as written.
inline SparseReal build_bh_hamiltonian(const FockBasis& basis, double hopping, double interaction) {
    const int M = basis.sites();
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(basis.size() * static_cast<std::size_t>(2 * M + 1));
    FockBasis::Occupation target;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const auto& n = basis[col];
        double diag = 0.0;
        for (int j = 0; j < M; ++j) {
            const double nj = n[static_cast<std::size_t>(j)];
            diag += 0.5 * interaction * nj * (nj - 1.0);
        }
        entries.emplace_back(static_cast<int>(col), static_cast<int>(col), diag);

        // a+_to a_from for both orientations of every bond (j, j+1)
        auto hop = [&](int from, int to) {
            const int nf = n[static_cast<std::size_t>(from)];
            if (nf == 0) return;
            const int nt = n[static_cast<std::size_t>(to)];
            target = n;
            --target[static_cast<std::size_t>(from)];
            ++target[static_cast<std::size_t>(to)];
            const std::size_t row = basis.index_of(target);
            entries.emplace_back(static_cast<int>(row), static_cast<int>(col),
                                 -hopping * std::sqrt(static_cast<double>(nf) * (nt + 1)));
        };
        for (int j = 0; j < M; ++j) {
            const int next = (j + 1) % M;
            hop(j, next);
            hop(next, j);
        }
    }
    const auto dim = static_cast<Eigen::Index>(basis.size());
    SparseReal H(dim, dim);
    H.setFromTriplets(entries.begin(), entries.end());
    H.makeCompressed();
    return H;
}

/// Diagonal of the number operator n_site (site is 1-based).
inline RealVector number_operator_diagonal(const FockBasis& basis, int site) {
    RealVector diag(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
        diag(static_cast<Eigen::Index>(i)) = basis[i][static_cast<std::size_t>(site - 1)];
    return diag;
}

// ------------------------------- Ground state -------------------------------

struct EigenOptions {
    int krylov_dim = 80;
    int max_restarts = 500;
    double residual_tolerance = 1e-10;
};

struct GroundState {
    double energy = 0.0;
    RealVector state;
    double residual = 0.0;
    int restarts = 0;
};

/// Lowest eigenpair of a real symmetric operator by restarted Lanczos with
/// full reorthogonalisation. The start vector is uniform, which overlaps the
/// ground state of any Hamiltonian with non-positive off-diagonal entries.
inline GroundState ground_state(const SparseReal& H, const EigenOptions& opts = {}) {
    const Eigen::Index dim = H.rows();
    if (dim == 0) throw std::invalid_argument("empty Hamiltonian");
    RealVector v = RealVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    const int m_max = static_cast<int>(std::min<Eigen::Index>(opts.krylov_dim, dim));

    GroundState gs;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        RealMatrix V(dim, m_max);
        RealVector alpha(m_max), beta(m_max);
        V.col(0) = v;
        int m = 0;
        for (int j = 0; j < m_max; ++j) {
            RealVector w = H * V.col(j);
            alpha(j) = V.col(j).dot(w);
            for (int pass = 0; pass < 2; ++pass)
                w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
            beta(j) = w.norm();
            m = j + 1;
            if (j + 1 == m_max || beta(j) < 1e-13) break;
            V.col(j + 1) = w / beta(j);
        }
        RealMatrix T = RealMatrix::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            T(j, j) = alpha(j);
            if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta(j);
        }
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(T);
        RealVector x = V.leftCols(m) * es.eigenvectors().col(0);
        x.normalize();
        const double energy = x.dot(H * x);
        const double residual = (H * x - energy * x).norm();
        gs = GroundState{energy, x, residual, restart};
        if (residual < opts.residual_tolerance) return gs;
        v = x;
    }
    throw ConvergenceError("Lanczos ground state did not converge (residual " + std::to_string(gs.residual) + ")");
}

// ------------------------------- Propagation --------------------------------

struct PropagationOptions {
    int krylov_dim = 30;
    double error_per_unit_time = 1e-10;
    double min_step = 1e-12;
    double norm_tolerance = 1e-8;
};

/// Short-iterative Lanczos propagator for exp(-i H t) with adaptive sub-steps.
/// Each sub-step keeps the a-posteriori Krylov error estimate
/// beta_m |[exp(-i T tau) e_1]_m| below error_per_unit_time * tau.
class KrylovPropagator {
public:
    explicit KrylovPropagator(const SparseReal& H, PropagationOptions opts = {})
        : H_(H.cast<cplx>()), opts_(opts) {}

    const PropagationOptions& options() const noexcept { return opts_; }

    Vector advance(const Vector& psi0, double t) const {
        if (t < 0.0) throw std::invalid_argument("propagation time must be non-negative");
        const double norm0 = psi0.norm();
        Vector psi = psi0;
        double done = 0.0;
        double tau = step_hint_ > 0.0 ? step_hint_ : t;
        while (done < t) {
            tau = std::min(tau, t - done);
            psi = step(psi, tau);
            done += tau;
            tau *= 1.5;
        }
        step_hint_ = tau;
        if (std::abs(psi.norm() - norm0) > opts_.norm_tolerance)
            throw ConvergenceError("norm drift exceeded tolerance during propagation");
        return psi;
    }

private:
    // Advances psi by at most tau; on return tau holds the step actually taken.
    Vector step(const Vector& psi, double& tau) const {
        const Eigen::Index dim = psi.size();
        const double scale = psi.norm();
        if (scale == 0.0) return psi;
        const int m_max = static_cast<int>(std::min<Eigen::Index>(opts_.krylov_dim, dim));
        Matrix V(dim, m_max);
        RealVector alpha(m_max), beta(m_max);
        V.col(0) = psi / scale;
        int m = 0;
        bool invariant = false;
        for (int j = 0; j < m_max; ++j) {
            Vector w = H_ * V.col(j);
            alpha(j) = V.col(j).dot(w).real();
            for (int pass = 0; pass < 2; ++pass)
                w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
            beta(j) = w.norm();
            m = j + 1;
            if (beta(j) < 1e-13) {
                invariant = true;
                break;
            }
            if (j + 1 < m_max) V.col(j + 1) = w / beta(j);
        }
        RealMatrix T = RealMatrix::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            T(j, j) = alpha(j);
            if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta(j);
        }
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(T);
        const RealMatrix& Q = es.eigenvectors();
        const RealVector& lambda = es.eigenvalues();
        auto coefficients = [&](double s) {
            Vector phase(m);
            for (int r = 0; r < m; ++r) phase(r) = std::exp(cplx{0.0, -lambda(r) * s}) * Q(0, r);
            return Vector(Q.cast<cplx>() * phase);
        };
        Vector c = coefficients(tau);
        if (!invariant) {
            for (;;) {
                const double err = beta(m - 1) * std::abs(c(m - 1));
                if (err <= opts_.error_per_unit_time * tau) break;
                tau *= std::max(0.1, 0.8 * std::pow(opts_.error_per_unit_time * tau / err, 1.0 / m));
                if (tau < opts_.min_step) throw ConvergenceError("Krylov step size underflow");
                c = coefficients(tau);
            }
        }
        return scale * (V.leftCols(m) * c);
    }

    SparseComplex H_;
    PropagationOptions opts_;
    mutable double step_hint_ = 0.0;
};

/// exp(-i H t) psi0.
inline Vector propagate(const SparseReal& H, const Vector& psi0, double t, const PropagationOptions& opts = {}) {
    return KrylovPropagator(H, opts).advance(psi0, t);
}

// ------------------------------- Exact solver -------------------------------

struct ExactOptions {
    std::size_t max_basis_size = 2'000'000;
    EigenOptions eigen;
    PropagationOptions propagation;
    unsigned threads = 0;  // 0: COLDBELL_THREADS / hardware concurrency
};

class ExactSolver {
public:
    /// Observer invoked after each grid time with the 2^d conditional gas states.
    using Observer = std::function<void(std::size_t time_index, const std::vector<Vector>& conditional)>;

    explicit ExactSolver(Model model, ExactOptions opts = {})
        : model_(std::move(model)),
          opts_(opts),
          basis_(model_.lattice.sites, model_.lattice.bosons, opts.max_basis_size),
          H_(build_bh_hamiltonian(basis_, model_.lattice.hopping, model_.lattice.interaction)),
          ground_(coldbell::ground_state(H_, opts.eigen)) {}

    const Model& model() const noexcept { return model_; }
    const FockBasis& basis() const noexcept { return basis_; }
    const SparseReal& hamiltonian() const noexcept { return H_; }
    const GroundState& ground_state() const noexcept { return ground_; }
    std::size_t configurations() const noexcept { return std::size_t{1} << model_.qubits(); }

    /// H_BH + eta * sum over excited qubits of n_{l_j}.
    SparseReal conditional_hamiltonian(BasisIndex config) const {
        const int d = model_.qubits();
        RealVector shift = RealVector::Zero(H_.rows());
        for (int q = 0; q < d; ++q)
            if (qubit_bit(config, q, d))
                shift += model_.coupling() * number_operator_diagonal(basis_, model_.impurities.sites[static_cast<std::size_t>(q)]);
        SparseReal Hi = H_;
        Hi.diagonal() += shift;
        return Hi;
    }

    /// Free-qubit energy (omega0/2) sum_j (2 i_j - 1).
    double qubit_energy(BasisIndex config) const {
        const int d = model_.qubits();
        double e = 0.0;
        for (int q = 0; q < d; ++q) e += z_value(config, q, d);
        return 0.5 * model_.impurities.splitting * e;
    }

    /// Reduced qubit states on a non-decreasing time grid starting from rho0 (x) |GS>.
    std::vector<QubitState> evolve(const QubitState& rho0, std::span<const double> times,
                                   const Observer& observer = {}) const {
        const int d = model_.qubits();
        if (rho0.qubits() != d) throw std::invalid_argument("initial state has the wrong number of qubits");
        const std::size_t n_cfg = configurations();

        std::vector<KrylovPropagator> props;
        props.reserve(n_cfg);
        for (BasisIndex c = 0; c < n_cfg; ++c) props.emplace_back(conditional_hamiltonian(c), opts_.propagation);

        std::vector<Vector> psi(n_cfg, ground_.state.cast<cplx>());
        std::vector<double> energies(n_cfg);
        for (BasisIndex c = 0; c < n_cfg; ++c) energies[c] = qubit_energy(c);

        std::vector<QubitState> out;
        out.reserve(times.size());
        double now = 0.0;
        for (std::size_t n = 0; n < times.size(); ++n) {
            const double t = times[n];
            if (t < now) throw std::invalid_argument("time grid must be non-negative and non-decreasing");
            const double dt = t - now;
            if (dt > 0.0) parallel_for(n_cfg, [&](std::size_t c) { psi[c] = props[c].advance(psi[c], dt); }, opts_.threads);
            now = t;
            if (observer) observer(n, psi);

            Matrix rho(static_cast<Eigen::Index>(n_cfg), static_cast<Eigen::Index>(n_cfg));
            for (std::size_t i = 0; i < n_cfg; ++i) {
                for (std::size_t j = 0; j < n_cfg; ++j) {
                    const auto ii = static_cast<Eigen::Index>(i);
                    const auto jj = static_cast<Eigen::Index>(j);
                    if (i == j) {
                        rho(ii, jj) = rho0(ii, jj);
                        continue;
                    }
                    if (j < i) {
                        rho(ii, jj) = std::conj(rho(jj, ii));
                        continue;
                    }
                    const cplx overlap = psi[j].dot(psi[i]);  // <psi_j|psi_i>
                    rho(ii, jj) = std::exp(cplx{0.0, -(energies[i] - energies[j]) * t}) * overlap * rho0(ii, jj);
                }
            }
            out.push_back(QubitState::unchecked(std::move(rho)));
        }
        return out;
    }

    QubitState evolve(const QubitState& rho0, double t) const {
        const double grid[1] = {t};
        return evolve(rho0, std::span<const double>(grid, 1)).front();
    }

private:
    Model model_;
    ExactOptions opts_;
    FockBasis basis_;
    SparseReal H_;
    GroundState ground_;
};

/// Reduced qubit state at time t from the exact many-body dynamics.
inline QubitState exact_reduced_state(const Model& model, const QubitState& rho0, double t, const ExactOptions& opts = {}) {
    return ExactSolver(model, opts).evolve(rho0, t);
}

}  // namespace coldbell
