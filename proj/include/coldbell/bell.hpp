// bell.hpp: Nonlocality witnesses for d-qubit states and their optimisation over
// projective spin measurements.
//
//   WWZB:      sum_r |xi~(r)| <= 1, xi~ the Walsh-Hadamard transform of the
//              full correlators xi(s) = <A^(1)_{s_1} ... A^(d)_{s_d}>.
//   GTNL:      three-party inequality I <= 0 whose violation certifies genuine
//              tripartite nonlocality.
//   Horodecki: two-qubit CHSH criterion M(rho) > 1, B = sqrt(max(0, M - 1)).
//
// All witnesses are evaluated from the Pauli expansion of rho,
// T_{mu_1..mu_d} = tr[rho sigma_mu_1 (x) ... (x) sigma_mu_d], contracted party by
// party with the local measurement operators.

#pragma once

#include "coldbell/nelder_mead.hpp"
#include "coldbell/parallel.hpp"
#include "coldbell/qubit_state.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace coldbell {

using Bloch = Eigen::Vector3d;

/// Local operator w_0 I + w_x X + w_y Y + w_z Z as its Pauli coefficients.
using LocalOperator = std::array<double, 4>;

// ------------------------------- Pauli tensor -------------------------------

class PauliTensor {
public:
    explicit PauliTensor(const QubitState& rho) : qubits_(rho.qubits()) {
        const int d = qubits_;
        const std::size_t n_strings = std::size_t{1} << (2 * d);
        const auto dim = static_cast<BasisIndex>(rho.dim());
        values_.resize(n_strings);
        const cplx i1{0.0, 1.0};
        for (std::size_t mu = 0; mu < n_strings; ++mu) {
            cplx acc{0.0, 0.0};
            for (BasisIndex x = 0; x < dim; ++x) {
                BasisIndex y = x;
                cplx coef{1.0, 0.0};
                for (int q = 0; q < d; ++q) {
                    const auto p = static_cast<Pauli>((mu >> (2 * (d - 1 - q))) & 3u);
                    const int xq = qubit_bit(x, q, d);
                    const BasisIndex bit = BasisIndex{1} << (d - 1 - q);
                    switch (p) {
                        case Pauli::I: break;
                        case Pauli::X: y ^= bit; break;
                        case Pauli::Y: y ^= bit; coef *= xq ? i1 : -i1; break;
                        case Pauli::Z: coef *= xq ? 1.0 : -1.0; break;
                    }
                }
                acc += rho(x, y) * coef;
            }
            values_[mu] = acc.real();
        }
    }

    int qubits() const noexcept { return qubits_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Component for a Pauli string, first entry acting on qubit 1.
    double at(std::span<const Pauli> string) const {
        std::size_t mu = 0;
        for (Pauli p : string) mu = (mu << 2) | static_cast<std::size_t>(p);
        return values_[mu];
    }

    /// Expectation values of every product operator O^(1)_{a_1} (x) ... (x) O^(d)_{a_d},
    /// with `local[q]` listing the candidate operators for party q. The result is
    /// indexed with party 1's choice most significant.
    std::vector<double> contract(const std::vector<std::vector<LocalOperator>>& local) const {
        if (static_cast<int>(local.size()) != qubits_) throw std::invalid_argument("one operator list per party required");
        std::vector<double> data = values_, next;
        std::size_t rest = values_.size() / 4;  // entries behind the leading index
        std::size_t done = 1;                   // entries of already contracted choices
        for (int q = 0; q < qubits_; ++q) {
            const auto& ops = local[static_cast<std::size_t>(q)];
            const std::size_t L = ops.size();
            next.assign(rest * done * L, 0.0);
            // data layout: [mu_q][remaining mu][done]; output: [remaining mu][done][L]
            const std::size_t tail = rest * done;
            for (std::size_t mu = 0; mu < 4; ++mu) {
                const double* src = data.data() + mu * tail;
                for (std::size_t l = 0; l < L; ++l) {
                    const double w = ops[l][mu];
                    if (w == 0.0) continue;
                    for (std::size_t r = 0; r < tail; ++r) next[r * L + l] += w * src[r];
                }
            }
            data.swap(next);
            done *= L;
            rest /= 4;
        }
        return data;
    }

private:
    int qubits_;
    std::vector<double> values_;
};

// ------------------------------- Measurements -------------------------------

/// Two Bloch vectors per party; observable A^(j)_s = u_{j,s} . sigma.
struct MeasurementSettings {
    std::vector<std::array<Bloch, 2>> axes;

    int parties() const noexcept { return static_cast<int>(axes.size()); }

    /// Angles per party in the order (theta_0, phi_0, theta_1, phi_1).
    static MeasurementSettings from_angles(std::span<const double> angles) {
        if (angles.size() % 4 != 0) throw std::invalid_argument("expected 4 angles per party");
        MeasurementSettings s;
        s.axes.resize(angles.size() / 4);
        for (std::size_t j = 0; j < s.axes.size(); ++j)
            for (std::size_t k = 0; k < 2; ++k) {
                const double th = angles[4 * j + 2 * k], ph = angles[4 * j + 2 * k + 1];
                s.axes[j][k] = Bloch(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
            }
        return s;
    }

    static MeasurementSettings uniform(int parties, const Bloch& u0, const Bloch& u1) {
        MeasurementSettings s;
        s.axes.assign(static_cast<std::size_t>(parties), {u0, u1});
        return s;
    }

    void validate(double tol = 1e-12) const {
        for (const auto& party : axes)
            for (const auto& u : party)
                if (std::abs(u.norm() - 1.0) > tol) throw std::invalid_argument("measurement Bloch vector is not a unit vector");
    }
};

namespace detail {
inline LocalOperator spin_observable(const Bloch& u) { return {0.0, u.x(), u.y(), u.z()}; }
inline LocalOperator outcome_zero_projector(const Bloch& u) { return {0.5, 0.5 * u.x(), 0.5 * u.y(), 0.5 * u.z()}; }
inline constexpr LocalOperator identity_operator{1.0, 0.0, 0.0, 0.0};

inline void check_parties(const PauliTensor& T, const MeasurementSettings& s) {
    if (s.parties() != T.qubits()) throw std::invalid_argument("settings and state have different party counts");
}
}  // namespace detail

// ------------------------------- Correlators --------------------------------

/// xi(s) and its normalised Walsh-Hadamard transform xi~(r) = 2^-d sum_s (-1)^{r.s} xi(s).
struct CorrelationTensor {
    std::vector<double> xi;
    std::vector<double> xi_tilde;
};

/// Unnormalised fast Walsh-Hadamard transform, in place.
inline void walsh_hadamard(std::vector<double>& v) {
    for (std::size_t h = 1; h < v.size(); h <<= 1)
        for (std::size_t i = 0; i < v.size(); i += 2 * h)
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = v[j], b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
}

inline CorrelationTensor correlation_tensor(const PauliTensor& T, const MeasurementSettings& s) {
    detail::check_parties(T, s);
    std::vector<std::vector<LocalOperator>> ops(static_cast<std::size_t>(s.parties()));
    for (std::size_t j = 0; j < ops.size(); ++j)
        ops[j] = {detail::spin_observable(s.axes[j][0]), detail::spin_observable(s.axes[j][1])};
    CorrelationTensor c;
    c.xi = T.contract(ops);
    c.xi_tilde = c.xi;
    walsh_hadamard(c.xi_tilde);
    const double norm = 1.0 / static_cast<double>(c.xi.size());
    for (double& v : c.xi_tilde) v *= norm;
    return c;
}

/// xi(s) for a single setting choice s (bitmask, party 1 most significant).
inline double correlator(const QubitState& rho, const MeasurementSettings& settings, BasisIndex s) {
    return correlation_tensor(PauliTensor(rho), settings).xi.at(s);
}

inline double wwzb_value(const PauliTensor& T, const MeasurementSettings& s) {
    double v = 0.0;
    for (double x : correlation_tensor(T, s).xi_tilde) v += std::abs(x);
    return v;
}

inline double wwzb_value(const QubitState& rho, const MeasurementSettings& s) { return wwzb_value(PauliTensor(rho), s); }

/// Decision threshold guarding against rounding noise.
inline constexpr double kWwzbThreshold = 1.0 + 1e-9;

/// CHSH combination xi(00) + xi(01) + xi(10) - xi(11) for two parties.
inline double chsh_value(const PauliTensor& T, const MeasurementSettings& s) {
    if (T.qubits() != 2) throw std::invalid_argument("CHSH is defined for two qubits");
    const auto xi = correlation_tensor(T, s).xi;
    return xi[0] + xi[1] + xi[2] - xi[3];
}

/// GTNL expression; P(...) are probabilities of outcome 0 for the listed
/// parties, with the unlisted party unmeasured.
inline double gtnl_value(const PauliTensor& T, const MeasurementSettings& s) {
    if (T.qubits() != 3) throw std::invalid_argument("GTNL inequality is defined for three qubits");
    detail::check_parties(T, s);
    std::vector<std::vector<LocalOperator>> ops(3);
    for (std::size_t j = 0; j < 3; ++j)
        ops[j] = {detail::identity_operator, detail::outcome_zero_projector(s.axes[j][0]),
                  detail::outcome_zero_projector(s.axes[j][1])};
    const auto P = T.contract(ops);
    // choice per party: 0 unmeasured, 1 setting 0, 2 setting 1
    auto p = [&](int a, int b, int c) { return P[static_cast<std::size_t>(9 * a + 3 * b + c)]; };
    return -2.0 * (p(2, 2, 0) + p(0, 2, 2) + p(2, 0, 2))
           - (p(1, 1, 2) + p(1, 2, 1) + p(2, 1, 1))
           + 2.0 * (p(2, 2, 1) + p(2, 1, 2) + p(1, 2, 2))
           + 2.0 * p(2, 2, 2);
}

inline double gtnl_value(const QubitState& rho, const MeasurementSettings& s) { return gtnl_value(PauliTensor(rho), s); }

// ------------------------------- Horodecki ----------------------------------

struct HorodeckiResult {
    Eigen::Matrix3d correlations;  // T_ij = tr[sigma_i (x) sigma_j rho]
    double m = 0.0;                // sum of the two largest eigenvalues of T^T T
    double b = 0.0;                // sqrt(max(0, m - 1))
};

inline HorodeckiResult horodecki(const PauliTensor& T) {
    if (T.qubits() != 2) throw std::invalid_argument("Horodecki criterion is defined for two qubits");
    HorodeckiResult r;
    const Pauli axes[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const Pauli s[2] = {axes[a], axes[b]};
            r.correlations(a, b) = T.at(s);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(r.correlations.transpose() * r.correlations,
                                                      Eigen::EigenvaluesOnly);
    r.m = es.eigenvalues()(1) + es.eigenvalues()(2);
    r.b = std::sqrt(std::max(0.0, r.m - 1.0));
    return r;
}

inline HorodeckiResult horodecki(const QubitState& rho) { return horodecki(PauliTensor(rho)); }

// ------------------------------- Optimisation -------------------------------

enum class Inequality { WWZB, GTNL, CHSH };

constexpr std::string_view to_string(Inequality w) {
    switch (w) {
        case Inequality::WWZB: return "wwzb";
        case Inequality::GTNL: return "gtnl";
        case Inequality::CHSH: return "chsh";
    }
    return "?";
}

struct BellOptions {
    int restarts = 32;
    std::uint64_t seed = 0;
    opt::SimplexOptions simplex{};
    unsigned threads = 1;
};

struct BellOptimum {
    double value = 0.0;
    MeasurementSettings settings;
    bool converged = false;
    int evaluations = 0;
};

inline double witness_value(Inequality w, const PauliTensor& T, const MeasurementSettings& s) {
    switch (w) {
        case Inequality::WWZB: return wwzb_value(T, s);
        case Inequality::GTNL: return gtnl_value(T, s);
        case Inequality::CHSH: return chsh_value(T, s);
    }
    return 0.0;
}

/// Maximises a witness over all 4d measurement angles by multistart simplex
/// descent from seeded uniform draws. The value is a lower bound on the true
/// maximum; `converged` reports whether the best restart met the tolerances.
inline BellOptimum optimize_bell(const PauliTensor& T, Inequality w, const BellOptions& opts = {}) {
    const int d = T.qubits();
    if (w == Inequality::GTNL && d != 3) throw std::invalid_argument("GTNL optimisation requires three qubits");
    if (w == Inequality::CHSH && d != 2) throw std::invalid_argument("CHSH optimisation requires two qubits");
    if (opts.restarts < 1) throw std::invalid_argument("at least one restart is required");

    auto objective = [&](const std::vector<double>& angles) {
        return -witness_value(w, T, MeasurementSettings::from_angles(angles));
    };
    std::vector<opt::SimplexResult> runs(static_cast<std::size_t>(opts.restarts));
    parallel_for(
        runs.size(),
        [&](std::size_t r) {
            std::mt19937_64 rng(opt::mix_seed(opts.seed, r));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::vector<double> x0(static_cast<std::size_t>(4 * d));
            for (std::size_t k = 0; k < x0.size(); ++k)
                x0[k] = (k % 2 == 0 ? std::numbers::pi : 2.0 * std::numbers::pi) * unit(rng);
            runs[r] = opt::nelder_mead(objective, std::move(x0), opts.simplex);
        },
        opts.threads);

    BellOptimum best;
    best.value = -std::numeric_limits<double>::infinity();
    for (const auto& run : runs) {
        best.evaluations += run.evaluations;
        if (-run.value > best.value) {
            best.value = -run.value;
            best.settings = MeasurementSettings::from_angles(run.x);
            best.converged = run.converged;
        }
    }
    return best;
}

inline BellOptimum optimize_bell(const QubitState& rho, Inequality w, const BellOptions& opts = {}) {
    return optimize_bell(PauliTensor(rho), w, opts);
}

}  // namespace coldbell
