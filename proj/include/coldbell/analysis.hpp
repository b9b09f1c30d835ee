// analysis.hpp: Noise robustness p*, BLP non-Markovianity and dephasing-rate signs

#pragma once

#include "coldbell/bell.hpp"
#include "coldbell/bogoliubov.hpp"
#include "coldbell/continuum.hpp"
#include "coldbell/qubit_state.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coldbell {

// ------------------------------- Depolarising noise -------------------------

/// p rho + (1 - p) I / 2^d
inline QubitState depolarize(const QubitState& rho, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarising weight must lie in [0, 1]");
    const Eigen::Index dim = rho.dim();
    return QubitState::unchecked(p * rho.matrix() + (1.0 - p) / static_cast<double>(dim) * Matrix::Identity(dim, dim));
}

// ------------------------------- Robustness ---------------------------------

struct PStarOptions {
    BellOptions bell{};
    double tolerance = 1e-3;
    double bracket_low = 0.01;
    int max_iterations = 40;
};

struct PStar {
    std::optional<double> value;  // absent when the state is not flagged nonlocal
    double witness = 0.0;         // optimised witness value of the noiseless state
    bool converged = true;
};

namespace detail {
inline bool violates(Inequality w, double value) {
    switch (w) {
        case Inequality::WWZB: return value > kWwzbThreshold;
        case Inequality::GTNL: return value > 1e-9;
        case Inequality::CHSH: return value > 2.0 + 2e-9;
    }
    return false;
}
}  // namespace detail

/// Smallest p at which p rho + (1 - p) I/2^d violates the witness, by bisection
/// on [bracket_low, 1] with a full optimisation at every probe. The optimised
/// witness is a maximum of affine functions of p, hence convex, and does not
/// violate at p = 0, so the violating set is an interval ending at 1.
inline PStar pstar_bisection(const QubitState& rho, Inequality w, const PStarOptions& opts = {}) {
    PStar out;
    auto probe = [&](double p) {
        const auto best = optimize_bell(depolarize(rho, p), w, opts.bell);
        out.converged = out.converged && best.converged;
        return best.value;
    };
    out.witness = probe(1.0);
    if (!detail::violates(w, out.witness)) return out;
    double lo = opts.bracket_low, hi = 1.0;
    if (detail::violates(w, probe(lo))) {
        out.value = lo;
        return out;
    }
    for (int it = 0; it < opts.max_iterations && hi - lo > 0.5 * opts.tolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        (detail::violates(w, probe(mid)) ? hi : lo) = mid;
    }
    out.value = hi;
    return out;
}

/// Robustness against white noise.
///  WWZB: correlators of traceless observables scale linearly, p* = 1/V.
///  CHSH: Horodecki M scales as p^2, p* = 1/sqrt(M).
///  GTNL: bisection with inner optimisation.
inline PStar pstar(const QubitState& rho, Inequality w, const PStarOptions& opts = {}) {
    switch (w) {
        case Inequality::WWZB: {
            PStar out;
            const auto best = optimize_bell(rho, w, opts.bell);
            out.witness = best.value;
            out.converged = best.converged;
            if (detail::violates(w, best.value)) out.value = 1.0 / best.value;
            return out;
        }
        case Inequality::CHSH: {
            PStar out;
            const auto h = horodecki(rho);
            out.witness = 2.0 * std::sqrt(h.m);
            if (h.m > 1.0 + 1e-9) out.value = 1.0 / std::sqrt(h.m);
            return out;
        }
        case Inequality::GTNL: return pstar_bisection(rho, w, opts);
    }
    return {};
}

// ------------------------------- BLP measure --------------------------------

struct BlpResult {
    std::vector<double> times;
    std::vector<double> total;                               // max over pairs, non-decreasing
    std::vector<std::pair<BasisIndex, BasisIndex>> pairs;     // i < j
    std::vector<std::vector<double>> per_pair;               // cumulative backflow per pair
};

/// BLP non-Markovianity restricted to the state pairs (|i> +- |j>)/sqrt(2), whose
/// trace distance is exp(-gamma_ij(t)). `dephasing(t)` returns the matrix of
/// gamma_ij(t). Positive increments of the trace distance between successive
/// grid times are accumulated per pair; N(t) is the largest accumulated sum.
template <class DephasingFn>
BlpResult blp_measure(int qubits, DephasingFn&& dephasing, std::span<const double> times) {
    const std::size_t dim = std::size_t{1} << qubits;
    BlpResult r;
    r.times.assign(times.begin(), times.end());
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) r.pairs.emplace_back(static_cast<BasisIndex>(i), static_cast<BasisIndex>(j));
    r.per_pair.assign(r.pairs.size(), std::vector<double>(times.size(), 0.0));
    r.total.assign(times.size(), 0.0);
    std::vector<double> previous(r.pairs.size(), 0.0);
    for (std::size_t n = 0; n < times.size(); ++n) {
        const RealMatrix g = dephasing(times[n]);
        for (std::size_t p = 0; p < r.pairs.size(); ++p) {
            const double D = std::exp(-g(r.pairs[p].first, r.pairs[p].second));
            double acc = n ? r.per_pair[p][n - 1] : 0.0;
            if (n && D > previous[p]) acc += D - previous[p];
            r.per_pair[p][n] = acc;
            previous[p] = D;
            r.total[n] = std::max(r.total[n], acc);
        }
    }
    return r;
}

inline RealMatrix dephasing_matrix(const BogoliubovSolution& sol, double t) {
    const Eigen::Index dim = Eigen::Index{1} << sol.qubits();
    RealMatrix g = RealMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = i + 1; j < dim; ++j)
            g(i, j) = g(j, i) = sol.dephasing(static_cast<BasisIndex>(i), static_cast<BasisIndex>(j), t);
    return g;
}

inline RealMatrix dephasing_matrix_two_impurity(const ContinuumConfig& c, int l1, int l2, double t) {
    const CollectiveRates rates = gamma_pm(t, c, l1, l2);
    RealMatrix g = RealMatrix::Zero(4, 4);
    for (BasisIndex i = 0; i < 4; ++i)
        for (BasisIndex j = 0; j < 4; ++j) g(i, j) = two_impurity_exponent(i, j, rates);
    return g;
}

inline BlpResult blp_measure(const BogoliubovSolution& sol, std::span<const double> times) {
    return blp_measure(sol.qubits(), [&](double t) { return dephasing_matrix(sol, t); }, times);
}

inline BlpResult blp_measure(const ContinuumConfig& c, int l1, int l2, std::span<const double> times) {
    return blp_measure(2, [&](double t) { return dephasing_matrix_two_impurity(c, l1, l2, t); }, times);
}

// ------------------------------- Rate sign ----------------------------------

struct RateSignReport {
    double numeric_rate = 0.0;        // central difference of gamma_ij
    double analytic_rate = 0.0;       // closed-form derivative of the mode sum
    std::optional<int> closed_form;   // M = 3 only: sign of sin(omega_k t), k = 2 pi / 3a
};

/// Sign of d gamma_ij/dt. For a three-site ring both modes share one
/// frequency, so d gamma/dt has the sign of sin(omega_k t); a negative rate
/// means information flows back from the gas.
inline RateSignReport dephasing_rate_sign(const BogoliubovSolution& sol, BasisIndex i, BasisIndex j, double t,
                                          double step = 1e-5) {
    RateSignReport r;
    const double lo = std::max(0.0, t - step);
    r.numeric_rate = (sol.dephasing(i, j, t + step) - sol.dephasing(i, j, lo)) / (t + step - lo);
    r.analytic_rate = sol.dephasing_rate(i, j, t);
    if (sol.model().lattice.sites == 3 && sol.dephasing(i, j, std::numbers::pi / sol.modes().front().omega) > 0.0) {
        const double s = std::sin(sol.modes().front().omega * t);
        r.closed_form = (s > 0.0) - (s < 0.0);
    }
    return r;
}

}  // namespace coldbell
