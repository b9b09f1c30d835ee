// continuum.hpp: Large-lattice dephasing via momentum integrals with a low-momentum cutoff
//
// Sums over the M-1 lattice modes become sum_k -> M * integral_{-1/2}^{1/2} dq with
// k = 2 pi q / a. The integrands are even in q, so the negative half folds
// into a factor 2 on [q0, 1/2].

#pragma once

#include "coldbell/model.hpp"
#include "coldbell/qubit_state.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace coldbell {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContinuumConfig {
    double density = 1.0;  // n0, atoms per site
    double hopping = 1.0;
    double interaction = 0.04;
    double coupling = 0.03;
    double splitting = 1.0;
    double cutoff = 1e-6;  // q0 = 1/M
    double relative_tolerance = 1e-11;
    int max_depth = 15;  // bisection levels per panel
    int panels_per_decade = 6;

    double renormalised_splitting() const { return splitting + coupling * density; }
};

inline void validate(const ContinuumConfig& c) {
    if (!(c.cutoff > 0.0 && c.cutoff < 0.5)) throw ConfigError("cutoff q0 must lie in (0, 1/2)");
    if (!(c.relative_tolerance > 0.0)) throw ConfigError("quadrature tolerance must be positive");
    if (c.max_depth < 1) throw ConfigError("quadrature depth must be at least 1");
    if (!(c.density > 0.0)) throw ConfigError("density must be positive");
    if (!(c.hopping > 0.0)) throw ConfigError("hopping must be positive");
    if (!(c.interaction >= 0.0)) throw ConfigError("interaction must be non-negative");
    if (!(c.coupling >= 0.0)) throw ConfigError("coupling must be non-negative");
}

namespace detail {

inline double eps_q(const ContinuumConfig& c, double q) {
    const double s = std::sin(std::numbers::pi * q);
    return 4.0 * c.hopping * s * s;
}

inline double omega_q(const ContinuumConfig& c, double q) {
    return bogoliubov_dispersion(eps_q(c, q), c.interaction, c.density);
}

/// Largest |d omega_q / dq| on [0, 1/2], sampled.
inline double omega_slope_max(const ContinuumConfig& c) {
    double best = 0.0;
    constexpr int samples = 2048;
    for (int i = 1; i <= samples; ++i) {
        const double q = 0.5 * i / samples;
        const double e = eps_q(c, q), w = omega_q(c, q);
        const double de = 4.0 * std::numbers::pi * c.hopping * std::sin(2.0 * std::numbers::pi * q);
        best = std::max(best, std::abs((e + c.interaction * c.density) / w * de));
    }
    return best;
}

/// Panel edges on [q0, 1/2]: logarithmic near the cutoff, plus uniform
/// panels across which omega_q t / 2 moves by at most pi / 2.
inline std::vector<double> panel_edges(const ContinuumConfig& c, double t) {
    std::vector<double> edges;
    const double lo = c.cutoff, hi = 0.5;
    const double decades = std::log10(hi / lo);
    const int n_log = std::max(1, static_cast<int>(std::ceil(decades * c.panels_per_decade)));
    for (int i = 0; i <= n_log; ++i) edges.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / n_log));
    if (t > 0.0) {
        const double width = std::numbers::pi / (omega_slope_max(c) * t);
        const auto n_osc = static_cast<long>(std::ceil((hi - lo) / width));
        for (long i = 1; i < n_osc; ++i) edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_osc));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges.front() = lo;
    edges.back() = hi;
    return edges;
}

/// One 15-point Gauss-Kronrod pass on [a, b]. The error reported by the
/// library for a non-adaptive pass refers to the reference interval [-1, 1];
/// it is rescaled here.
template <class F>
double gk15(F& f, double a, double b, double& error, double& l1) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double v = GK::integrate(f, a, b, 0, 0.0, &error, &l1);
    error *= 0.5 * (b - a);
    return v;
}

template <class F>
double gk15_adaptive(F& f, double a, double b, double tol, int depth, double& error, double& l1) {
    const double v = gk15(f, a, b, error, l1);
    if (depth == 0 || error <= tol * l1) return v;
    const double mid = 0.5 * (a + b);
    double e1 = 0.0, e2 = 0.0, n1 = 0.0, n2 = 0.0;
    const double r = gk15_adaptive(f, a, mid, tol, depth - 1, e1, n1) + gk15_adaptive(f, mid, b, tol, depth - 1, e2, n2);
    error = e1 + e2;
    l1 = n1 + n2;
    return r;
}

/// Panel-wise quadrature; every panel is bisected until its error is below
/// the relative tolerance times its own L1 norm, so the total error is bounded
/// relative to the L1 norm of the whole integrand.
template <class F>
double integrate(const ContinuumConfig& c, double t, F&& f) {
    const auto edges = panel_edges(c, t);
    double total = 0.0, l1 = 0.0, err_sum = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        double err = 0.0, pl1 = 0.0;
        total += gk15_adaptive(f, edges[p], edges[p + 1], c.relative_tolerance, c.max_depth, err, pl1);
        l1 += pl1;
        err_sum += err;
    }
    if (err_sum > 10.0 * c.relative_tolerance * l1)
        throw QuadratureError("momentum integral did not converge (error estimate " + std::to_string(err_sum) + ")");
    return total;
}

}  // namespace detail

/// gamma_ij(t) = 4 eta^2 n0 int_{q0}^{1/2} (eps_q/omega_q^3) sin^2(omega_q t/2) S_ij(q) dq,
/// S_ij(q) = |sum_m e^{2 pi i q l_m}(i_m - j_m)|^2. `sites` are 1-based.
inline double gamma_continuum(BasisIndex i, BasisIndex j, double t, const ContinuumConfig& c,
                              const std::vector<int>& sites) {
    validate(c);
    if (i == j || t == 0.0) return 0.0;
    const int d = static_cast<int>(sites.size());
    std::vector<double> diff(sites.size());
    for (int m = 0; m < d; ++m) diff[static_cast<std::size_t>(m)] = qubit_bit(i, m, d) - qubit_bit(j, m, d);
    auto f = [&](double q) {
        cplx s{0.0, 0.0};
        for (int m = 0; m < d; ++m)
            if (diff[static_cast<std::size_t>(m)] != 0.0)
                s += diff[static_cast<std::size_t>(m)] *
                     std::polar(1.0, 2.0 * std::numbers::pi * q * sites[static_cast<std::size_t>(m)]);
        const double e = detail::eps_q(c, q), w = detail::omega_q(c, q);
        const double sn = std::sin(0.5 * w * t);
        return e / (w * w * w) * sn * sn * std::norm(s);
    };
    return 4.0 * c.coupling * c.coupling * c.density * detail::integrate(c, t, f);
}

/// Single-impurity dephasing Gamma_0(t).
inline double gamma0(double t, const ContinuumConfig& c) {
    validate(c);
    if (t == 0.0) return 0.0;
    auto f = [&](double q) {
        const double e = detail::eps_q(c, q), w = detail::omega_q(c, q);
        const double sn = std::sin(0.5 * w * t);
        return e / (w * w * w) * sn * sn;
    };
    return 4.0 * c.coupling * c.coupling * c.density * detail::integrate(c, t, f);
}

/// Cross term Gamma(t) for impurities on sites l1, l2; may take either sign.
inline double gamma_cross(double t, const ContinuumConfig& c, int l1, int l2) {
    validate(c);
    if (t == 0.0) return 0.0;
    const double dl = l1 - l2;
    auto f = [&](double q) {
        const double e = detail::eps_q(c, q), w = detail::omega_q(c, q);
        const double sn = std::sin(0.5 * w * t);
        return e / (w * w * w) * sn * sn * std::cos(2.0 * std::numbers::pi * q * dl);
    };
    return 8.0 * c.coupling * c.coupling * c.density * detail::integrate(c, t, f);
}

struct CollectiveRates {
    double gamma0 = 0.0;
    double cross = 0.0;
    double plus = 0.0;   // 2 Gamma_0 + Gamma
    double minus = 0.0;  // 2 Gamma_0 - Gamma
};

inline CollectiveRates gamma_pm(double t, const ContinuumConfig& c, int l1, int l2) {
    CollectiveRates r;
    r.gamma0 = gamma0(t, c);
    r.cross = gamma_cross(t, c, l1, l2);
    r.plus = 2.0 * r.gamma0 + r.cross;
    r.minus = 2.0 * r.gamma0 - r.cross;
    return r;
}

/// Continuum ZZ coefficient
/// c(t) = eta^2 n0 int_{q0}^{1/2} (eps_q/omega_q^3)(sin(omega_q t) - omega_q t) cos(2 pi q dl) dq.
inline double zz_coefficient_continuum(double t, const ContinuumConfig& c, int l1, int l2) {
    validate(c);
    if (t == 0.0) return 0.0;
    const double dl = l1 - l2;
    auto f = [&](double q) {
        const double e = detail::eps_q(c, q), w = detail::omega_q(c, q);
        return e / (w * w * w) * (std::sin(w * t) - w * t) * std::cos(2.0 * std::numbers::pi * q * dl);
    };
    return c.coupling * c.coupling * c.density * detail::integrate(c, t, f);
}

/// Dephasing exponent of a two-qubit index pair in terms of Gamma_0, Gamma_+-.
inline double two_impurity_exponent(BasisIndex i, BasisIndex j, const CollectiveRates& r) {
    const int d1 = qubit_bit(i, 0, 2) - qubit_bit(j, 0, 2);
    const int d2 = qubit_bit(i, 1, 2) - qubit_bit(j, 1, 2);
    if (d1 == 0 && d2 == 0) return 0.0;
    if (d1 == 0 || d2 == 0) return r.gamma0;
    return d1 == d2 ? r.plus : r.minus;
}

/// Two-impurity reduced state in the large-lattice limit. The coherent-overlap
/// phase integrates an odd function over the symmetric q range and vanishes;
/// the phase comes from the effective Hamiltonian with continuum c_jm.
inline QubitState reduced_state_two_impurity_continuum(const QubitState& rho0, double t, const ContinuumConfig& c,
                                                       int l1, int l2, bool unitary_only = false) {
    validate(c);
    if (rho0.qubits() != 2) throw std::invalid_argument("continuum reduced state is defined for two impurities");
    if (l1 == l2) throw ConfigError("impurities must sit on distinct sites");
    const CollectiveRates rates = unitary_only ? CollectiveRates{} : gamma_pm(t, c, l1, l2);
    const double c_self = zz_coefficient_continuum(t, c, l1, l1);  // site-independent
    const double c12 = zz_coefficient_continuum(t, c, l1, l2);
    const double w = 0.5 * c.renormalised_splitting() * t + c_self + c12;  // omega_1 = omega_2

    auto energy = [&](BasisIndex b) {
        const int z1 = z_value(b, 0, 2), z2 = z_value(b, 1, 2);
        return w * (z1 + z2) + c12 * z1 * z2;
    };
    Matrix rho(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i) {
        rho(i, i) = rho0(i, i);
        for (Eigen::Index j = i + 1; j < 4; ++j) {
            const auto bi = static_cast<BasisIndex>(i), bj = static_cast<BasisIndex>(j);
            const double g = two_impurity_exponent(bi, bj, rates);
            rho(i, j) = std::exp(cplx{-g, -(energy(bi) - energy(bj))}) * rho0(i, j);
            rho(j, i) = std::conj(rho(i, j));
        }
    }
    return QubitState::unchecked(std::move(rho));
}

}  // namespace coldbell
