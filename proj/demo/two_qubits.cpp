// Two qubits on a small ring: exact and Bogoliubov states side by side,
// with the Horodecki measure of each.

#include "coldbell/coldbell.hpp"

#include <cstdio>

int main() {
    using namespace coldbell;
    LatticeConfig lattice;
    lattice.sites = 4;
    lattice.bosons = 16;
    lattice.interaction = 2.0 / 16;
    ImpurityConfig impurities;
    impurities.sites = {1, 3};
    impurities.coupling = 0.1;
    const Model model = validate_config(lattice, impurities);

    const ExactSolver exact(model);
    const BogoliubovSolution approx(model);
    const QubitState rho0 = plus_state(2);

    std::printf("%6s %12s %12s %12s\n", "t", "B_exact", "B_bogol", "distance");
    for (double t = 0.0; t <= 20.0; t += 2.0) {
        const QubitState a = exact.evolve(rho0, t), b = approx.evolve(rho0, t);
        std::printf("%6.1f %12.6f %12.6f %12.2e\n", t, horodecki(a).b, horodecki(b).b, trace_distance(a, b));
    }
}
