// model.hpp: Lattice and impurity configuration, Bogoliubov quasiparticle spectrum
//
// Units: hbar = 1, energies in units of the hopping J unless the caller chooses
// otherwise, lattice constant a = 1 by default.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coldbell {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bose-Hubbard ring of `sites` sites holding `bosons` atoms.
struct LatticeConfig {
    int sites = 3;
    double hopping = 1.0;
    double interaction = 0.0;
    int bosons = 1;
    double spacing = 1.0;
    /// Quasicondensate density; defaults to bosons / sites when unset.
    std::optional<double> density_override;
};

/// Two-level impurities on distinct lattice sites (1-based site indices).
struct ImpurityConfig {
    std::vector<int> sites{1};
    double splitting = 1.0;  // bare qubit splitting omega_0
    double coupling = 0.0;   // qubit-gas coupling eta
};

/// Validated configuration with derived quantities populated.
struct Model {
    LatticeConfig lattice;
    ImpurityConfig impurities;
    double density = 0.0;             // n0
    double renormalised_splitting = 0.0;  // omega_0 + eta n0

    int qubits() const noexcept { return static_cast<int>(impurities.sites.size()); }
    double coupling() const noexcept { return impurities.coupling; }
};

inline Model validate_config(const LatticeConfig& lattice, const ImpurityConfig& impurities) {
    if (lattice.sites < 2) throw ConfigError("lattice needs at least 2 sites");
    if (!(lattice.hopping > 0.0)) throw ConfigError("hopping J must be positive");
    if (!(lattice.interaction >= 0.0)) throw ConfigError("interaction U must be non-negative");
    if (lattice.bosons < 1) throw ConfigError("boson number N must be at least 1");
    if (!(lattice.spacing > 0.0)) throw ConfigError("lattice constant a must be positive");

    const int d = static_cast<int>(impurities.sites.size());
    if (d < 1) throw ConfigError("at least one impurity is required");
    if (d > lattice.sites) throw ConfigError("more impurities than lattice sites");
    std::vector<int> sorted = impurities.sites;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("duplicate impurity site");
    if (sorted.front() < 1 || sorted.back() > lattice.sites)
        throw ConfigError("impurity site outside 1.." + std::to_string(lattice.sites));
    if (!(impurities.coupling >= 0.0)) throw ConfigError("coupling eta must be non-negative");
    if (!std::isfinite(impurities.splitting)) throw ConfigError("qubit splitting must be finite");

    Model m;
    m.lattice = lattice;
    m.impurities = impurities;
    m.density = lattice.density_override.value_or(static_cast<double>(lattice.bosons) / lattice.sites);
    if (!(m.density > 0.0)) throw ConfigError("quasicondensate density must be positive");
    m.renormalised_splitting = impurities.splitting + impurities.coupling * m.density;
    return m;
}

/// Single-particle energy 4J sin^2(ka/2).
inline double free_dispersion(double k, double hopping, double spacing) {
    const double s = std::sin(0.5 * k * spacing);
    return 4.0 * hopping * s * s;
}

/// Bogoliubov energy sqrt(eps^2 + 2 U n0 eps).
inline double bogoliubov_dispersion(double eps, double interaction, double density) {
    return std::sqrt(eps * eps + 2.0 * interaction * density * eps);
}

struct BogoliubovMode {
    double k = 0.0;
    double epsilon = 0.0;  // single-particle energy
    double omega = 0.0;    // quasiparticle energy
    double xi = 0.0;       // eta sqrt(n0 eps / (omega M))
    double nu = 0.0;       // 2 eta^2 n0 eps / (omega^3 M)

    /// 2 xi sin(omega t / 2) / omega
    double f(double t) const { return 2.0 * xi * std::sin(0.5 * omega * t) / omega; }
};

/// Modes k = 2 pi m / (M a), m = 1 .. M-1 (the condensate mode k = 0 is excluded).
inline std::vector<BogoliubovMode> bogoliubov_modes(const Model& model) {
    const auto& lat = model.lattice;
    const double eta = model.coupling();
    const double M = lat.sites;
    std::vector<BogoliubovMode> modes;
    modes.reserve(static_cast<std::size_t>(lat.sites - 1));
    for (int m = 1; m < lat.sites; ++m) {
        BogoliubovMode mode;
        mode.k = 2.0 * std::numbers::pi * m / (M * lat.spacing);
        mode.epsilon = free_dispersion(mode.k, lat.hopping, lat.spacing);
        mode.omega = bogoliubov_dispersion(mode.epsilon, lat.interaction, model.density);
        mode.xi = eta * std::sqrt(model.density * mode.epsilon / (mode.omega * M));
        mode.nu = 2.0 * eta * eta * model.density * mode.epsilon / (mode.omega * mode.omega * mode.omega * M);
        modes.push_back(mode);
    }
    return modes;
}

}  // namespace coldbell
