// bogoliubov.hpp: Closed-form reduced qubit state under the Bogoliubov approximation
//
// With the gas in the Bogoliubov vacuum, every qubit configuration i displaces
// mode k into the coherent state x_i^k(t). The reduced state is
//     rho_ij(t) = exp(-gamma_ij(t)) exp(i phi_ij(t)) rho_ij(0)
// where gamma_ij is the dephasing exponent and phi_ij collects the precession,
// the induced ZZ coupling c_jm(t) and the coherent-state overlap phase.
// The Magnus expansion of the interaction-picture propagator ends at second
// order, so these expressions are exact for the quadratic Hamiltonian.
// Overall constant phases are dropped; compare with the exact solver through
// trace distance, never amplitudes.

#pragma once

#include "coldbell/model.hpp"
#include "coldbell/qubit_state.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace coldbell {

/// <x|y> for Glauber coherent states: exp(-|x|^2/2 - |y|^2/2 + conj(x) y).
inline cplx glauber_overlap(cplx x, cplx y) {
    return std::exp(-0.5 * std::norm(x) - 0.5 * std::norm(y) + std::conj(x) * y);
}

class BogoliubovSolution {
public:
    explicit BogoliubovSolution(Model model) : model_(std::move(model)), modes_(bogoliubov_modes(model_)) {
        const int d = qubits();
        if (d > kMaxQubits) throw ConfigError("too many qubits");
        // Phase factors e^{i k a l_m} for every mode and impurity.
        site_phase_.resize(modes_.size());
        for (std::size_t k = 0; k < modes_.size(); ++k) {
            site_phase_[k].resize(static_cast<std::size_t>(d));
            for (int m = 0; m < d; ++m)
                site_phase_[k][static_cast<std::size_t>(m)] =
                    std::polar(1.0, modes_[k].k * model_.lattice.spacing * site(m));
        }
    }

    const Model& model() const noexcept { return model_; }
    const std::vector<BogoliubovMode>& modes() const noexcept { return modes_; }
    int qubits() const noexcept { return model_.qubits(); }

    /// gamma_ij(t) = sum_k nu_k sin^2(omega_k t/2) |sum_m e^{i k a l_m}(i_m - j_m)|^2
    double dephasing(BasisIndex i, BasisIndex j, double t) const {
        if (i == j) return 0.0;
        const int d = qubits();
        double g = 0.0;
        for (std::size_t k = 0; k < modes_.size(); ++k) {
            cplx s{0.0, 0.0};
            for (int m = 0; m < d; ++m)
                s += site_phase_[k][static_cast<std::size_t>(m)] *
                     static_cast<double>(qubit_bit(i, m, d) - qubit_bit(j, m, d));
            const double sn = std::sin(0.5 * modes_[k].omega * t);
            g += modes_[k].nu * sn * sn * std::norm(s);
        }
        return g;
    }

    /// d gamma_ij / dt, analytic.
    double dephasing_rate(BasisIndex i, BasisIndex j, double t) const {
        if (i == j) return 0.0;
        const int d = qubits();
        double g = 0.0;
        for (std::size_t k = 0; k < modes_.size(); ++k) {
            cplx s{0.0, 0.0};
            for (int m = 0; m < d; ++m)
                s += site_phase_[k][static_cast<std::size_t>(m)] *
                     static_cast<double>(qubit_bit(i, m, d) - qubit_bit(j, m, d));
            g += modes_[k].nu * 0.5 * modes_[k].omega * std::sin(modes_[k].omega * t) * std::norm(s);
        }
        return g;
    }

    /// c_jm(t) = (1/2) sum_k (xi_k/omega_k)^2 (sin(omega_k t) - omega_k t) cos(k a (l_j - l_m)),
    /// j, m 0-based impurity labels.
    double zz_coefficient(int j, int m, double t) const {
        const double dl = site(j) - site(m);
        double c = 0.0;
        for (const auto& mode : modes_) {
            const double r = mode.xi / mode.omega;
            c += r * r * (std::sin(mode.omega * t) - mode.omega * t) * std::cos(mode.k * model_.lattice.spacing * dl);
        }
        return 0.5 * c;
    }

    /// omega_j(t) = renormalised splitting * t/2 + sum_m c_jm(t)
    double local_phase(int j, double t) const {
        double w = 0.5 * model_.renormalised_splitting * t;
        for (int m = 0; m < qubits(); ++m) w += zz_coefficient(j, m, t);
        return w;
    }

    /// phi_ij(t): precession, ZZ and coherent-overlap terms.
    double phase(BasisIndex i, BasisIndex j, double t) const {
        if (i == j) return 0.0;
        const int d = qubits();
        auto sign = [](int bit) { return bit ? -1.0 : 1.0; };
        double phi = 0.0;
        for (int s = 0; s < d; ++s)
            phi += local_phase(s, t) * (sign(qubit_bit(i, s, d)) - sign(qubit_bit(j, s, d)));
        for (int r = 0; r < d; ++r)
            for (int s = 0; s < r; ++s)
                phi += zz_coefficient(r, s, t) *
                       (sign(qubit_bit(j, r, d) ^ qubit_bit(j, s, d)) - sign(qubit_bit(i, r, d) ^ qubit_bit(i, s, d)));
        phi += overlap_phase(i, j, t);
        return phi;
    }

    /// sum_k sum_{r,s} f_k(t)^2 sin(k a (l_r - l_s)) i_r j_s. On a ring the
    /// modes k and 2 pi/a - k cancel pairwise, so this vanishes up to rounding.
    double overlap_phase(BasisIndex i, BasisIndex j, double t) const {
        const int d = qubits();
        double phi = 0.0;
        for (const auto& mode : modes_) {
            const double f = mode.f(t);
            for (int r = 0; r < d; ++r) {
                if (!qubit_bit(i, r, d)) continue;
                for (int s = 0; s < d; ++s)
                    if (qubit_bit(j, s, d))
                        phi += f * f * std::sin(mode.k * model_.lattice.spacing * (site(r) - site(s)));
            }
        }
        return phi;
    }

    /// x_i^k(t) = (xi_k/omega_k)(1 - e^{i omega_k t}) sum_m i_m e^{i k a l_m}
    cplx displacement(BasisIndex i, std::size_t k, double t) const {
        const int d = qubits();
        cplx s{0.0, 0.0};
        for (int m = 0; m < d; ++m)
            if (qubit_bit(i, m, d)) s += site_phase_[k][static_cast<std::size_t>(m)];
        const auto& mode = modes_[k];
        return mode.xi / mode.omega * (1.0 - std::polar(1.0, mode.omega * t)) * s;
    }

    /// h(t) = sum_j omega_j(t) Z_j + sum_{j>m} c_jm(t) Z_j Z_m, diagonal in the
    /// computational basis with Z|1> = +|1>.
    Matrix effective_hamiltonian(double t) const {
        const int d = qubits();
        const Eigen::Index dim = Eigen::Index{1} << d;
        std::vector<double> w(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) w[static_cast<std::size_t>(j)] = local_phase(j, t);
        Matrix h = Matrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const auto b = static_cast<BasisIndex>(i);
            double e = 0.0;
            for (int j = 0; j < d; ++j) e += w[static_cast<std::size_t>(j)] * z_value(b, j, d);
            for (int j = 0; j < d; ++j)
                for (int m = 0; m < j; ++m) e += zz_coefficient(j, m, t) * z_value(b, j, d) * z_value(b, m, d);
            h(i, i) = e;
        }
        return h;
    }

    /// Reduced state at time t. With `unitary_only` every gamma_ij is set to zero.
    QubitState evolve(const QubitState& rho0, double t, bool unitary_only = false) const {
        check(rho0);
        const Eigen::Index dim = rho0.dim();
        Matrix rho(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            rho(i, i) = rho0(i, i);
            for (Eigen::Index j = i + 1; j < dim; ++j) {
                const auto bi = static_cast<BasisIndex>(i);
                const auto bj = static_cast<BasisIndex>(j);
                const double g = unitary_only ? 0.0 : dephasing(bi, bj, t);
                rho(i, j) = std::exp(cplx{-g, phase(bi, bj, t)}) * rho0(i, j);
                rho(j, i) = std::conj(rho(i, j));
            }
        }
        return QubitState::unchecked(std::move(rho));
    }

    /// Same state assembled as prod_k <x_j^k|x_i^k> [U rho0 U^dagger]_ij with
    /// U = exp(-i h(t)).
    QubitState evolve_overlap_form(const QubitState& rho0, double t) const {
        check(rho0);
        const Eigen::Index dim = rho0.dim();
        const Matrix h = effective_hamiltonian(t);
        Matrix rho(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                const auto bi = static_cast<BasisIndex>(i);
                const auto bj = static_cast<BasisIndex>(j);
                cplx overlap{1.0, 0.0};
                for (std::size_t k = 0; k < modes_.size(); ++k)
                    overlap *= glauber_overlap(displacement(bj, k, t), displacement(bi, k, t));
                const cplx unitary = std::exp(cplx{0.0, -(h(i, i).real() - h(j, j).real())});
                rho(i, j) = overlap * unitary * rho0(i, j);
            }
        }
        return QubitState::unchecked(std::move(rho));
    }

private:
    double site(int m) const { return model_.impurities.sites[static_cast<std::size_t>(m)]; }

    void check(const QubitState& rho0) const {
        if (rho0.qubits() != qubits()) throw std::invalid_argument("initial state has the wrong number of qubits");
    }

    Model model_;
    std::vector<BogoliubovMode> modes_;
    std::vector<std::vector<cplx>> site_phase_;
};

/// Reduced state at time t under the Bogoliubov approximation.
inline QubitState reduced_state_bogoliubov(const QubitState& rho0, double t, const Model& model) {
    return BogoliubovSolution(model).evolve(rho0, t);
}

}  // namespace coldbell
