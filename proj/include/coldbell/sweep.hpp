// sweep.hpp: (eta, t) grid runner producing Bell values, p*, BLP and dephasing rates
//
// Cells are independent work items; every cell draws its optimiser seed from
// the master seed and its grid position, so results do not depend on the
// number of workers.

#pragma once

#include "coldbell/analysis.hpp"
#include "coldbell/bell.hpp"
#include "coldbell/bogoliubov.hpp"
#include "coldbell/continuum.hpp"
#include "coldbell/exact.hpp"
#include "coldbell/model.hpp"
#include "coldbell/parallel.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coldbell {

enum class Solver { Exact, Bogoliubov, Continuum };

constexpr std::string_view to_string(Solver s) {
    switch (s) {
        case Solver::Exact: return "exact";
        case Solver::Bogoliubov: return "bogoliubov";
        case Solver::Continuum: return "continuum";
    }
    return "?";
}

inline Solver parse_solver(std::string_view name) {
    if (name == "exact") return Solver::Exact;
    if (name == "bogoliubov") return Solver::Bogoliubov;
    if (name == "continuum") return Solver::Continuum;
    throw ConfigError("unknown solver '" + std::string(name) + "'");
}

enum class InitialState { Plus, Ghz };

inline QubitState initial_state(InitialState s, int qubits) {
    return s == InitialState::Plus ? plus_state(qubits) : ghz_state(qubits);
}

struct WitnessSet {
    bool wwzb = true;
    bool gtnl = false;        // three qubits only
    bool horodecki = false;   // two qubits only
    bool pstar = true;        // WWZB robustness, or Horodecki robustness for two qubits
    bool pstar_gtnl = false;  // bisection, expensive
    bool blp = true;          // analytic solvers only
};

struct SweepSpec {
    LatticeConfig lattice;
    ImpurityConfig impurities;    // coupling is replaced by each eta
    ContinuumConfig continuum;    // continuum solver; coupling is replaced by each eta
    std::vector<double> etas;
    std::vector<double> times;
    Solver solver = Solver::Bogoliubov;
    WitnessSet witnesses;
    InitialState initial = InitialState::Plus;
    bool unitary_only = false;  // drop every gamma_ij from the state, keep the phases
    std::uint64_t seed = 0;
    BellOptions bell;
    PStarOptions robustness;
    ExactOptions exact;
};

struct SweepCell {
    Solver solver = Solver::Bogoliubov;
    double eta = 0.0;
    double t = 0.0;
    std::optional<double> wwzb, gtnl, horodecki_b, pstar, blp, gamma0, gamma_plus, gamma_minus;
    std::optional<double> pstar_gtnl;  // JSON only
    std::string error;
};

struct SweepResult {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    Solver solver = Solver::Bogoliubov;
    std::vector<double> etas;
    std::vector<double> times;
    std::vector<SweepCell> cells;  // row-major: eta outer, t inner
    std::vector<BlpResult> blp;    // one per eta row for the analytic solvers, empty otherwise
    nlohmann::json metadata = nlohmann::json::object();

    bool ok() const {
        for (const auto& c : cells)
            if (!c.error.empty()) return false;
        return true;
    }
    const SweepCell& at(std::size_t eta_index, std::size_t t_index) const { return cells.at(eta_index * times.size() + t_index); }
};

// ------------------------------- Formatting ---------------------------------

/// 12 significant digits.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

/// FNV-1a, stable across platforms and runs.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline nlohmann::json describe(const SweepSpec& s) {
    using nlohmann::json;
    json j;
    j["solver"] = std::string(to_string(s.solver));
    j["lattice"] = {{"M", s.lattice.sites},
                    {"J", s.lattice.hopping},
                    {"U", s.lattice.interaction},
                    {"N", s.lattice.bosons},
                    {"a", s.lattice.spacing},
                    {"n0_override", s.lattice.density_override ? json(*s.lattice.density_override) : json(nullptr)}};
    j["impurities"] = {{"d", s.impurities.sites.size()}, {"sites", s.impurities.sites}, {"omega0", s.impurities.splitting}};
    if (s.solver == Solver::Continuum)
        j["continuum"] = {{"n0", s.continuum.density}, {"U", s.continuum.interaction}, {"J", s.continuum.hopping},
                          {"omega0", s.continuum.splitting}, {"q0", s.continuum.cutoff},
                          {"relative_tolerance", s.continuum.relative_tolerance}};
    j["initial_state"] = s.initial == InitialState::Plus ? "plus" : "ghz";
    j["unitary_only"] = s.unitary_only;
    j["tolerances"] = {{"restarts", s.bell.restarts},
                       {"angle_tolerance", s.bell.simplex.x_tolerance},
                       {"max_evaluations", s.bell.simplex.max_evaluations},
                       {"pstar_tolerance", s.robustness.tolerance},
                       {"krylov_dim", s.exact.propagation.krylov_dim},
                       {"krylov_error_per_time", s.exact.propagation.error_per_unit_time}};
    j["witnesses"] = {{"wwzb", s.witnesses.wwzb}, {"gtnl", s.witnesses.gtnl}, {"horodecki", s.witnesses.horodecki},
                      {"pstar", s.witnesses.pstar}, {"pstar_gtnl", s.witnesses.pstar_gtnl}, {"blp", s.witnesses.blp}};
    j["axes"] = {{"eta", s.etas}, {"t", s.times}};
    return j;
}

inline std::uint64_t config_hash(const SweepSpec& s) { return fnv1a(describe(s).dump()); }

// ------------------------------- Runner -------------------------------------

namespace detail {

struct RowData {
    std::vector<QubitState> states;
    std::vector<std::optional<CollectiveRates>> rates;
    std::optional<BlpResult> blp;
    std::string error;
};

inline RowData compute_row(const SweepSpec& spec, double eta, bool inner_parallel) {
    RowData row;
    const std::size_t nt = spec.times.size();
    row.rates.assign(nt, std::nullopt);
    const int d = static_cast<int>(spec.impurities.sites.size());
    const QubitState rho0 = initial_state(spec.initial, d);

    switch (spec.solver) {
        case Solver::Exact: {
            if (spec.unitary_only) throw ConfigError("the exact solver has no separable unitary part");
            ImpurityConfig imp = spec.impurities;
            imp.coupling = eta;
            ExactOptions opts = spec.exact;
            if (!inner_parallel) opts.threads = 1;
            row.states = ExactSolver(validate_config(spec.lattice, imp), opts).evolve(rho0, spec.times);
            break;
        }
        case Solver::Bogoliubov: {
            ImpurityConfig imp = spec.impurities;
            imp.coupling = eta;
            const BogoliubovSolution sol(validate_config(spec.lattice, imp));
            row.states.reserve(nt);
            for (std::size_t n = 0; n < nt; ++n) {
                const double t = spec.times[n];
                row.states.push_back(sol.evolve(rho0, t, spec.unitary_only));
                if (d == 2) {
                    CollectiveRates r;
                    r.gamma0 = sol.dephasing(0b11, 0b10, t);
                    r.plus = sol.dephasing(0b11, 0b00, t);
                    r.minus = sol.dephasing(0b10, 0b01, t);
                    r.cross = r.plus - 2.0 * r.gamma0;
                    row.rates[n] = r;
                }
            }
            if (spec.witnesses.blp) row.blp = blp_measure(sol, spec.times);
            break;
        }
        case Solver::Continuum: {
            if (d != 2) throw ConfigError("the continuum solver handles exactly two impurities");
            ContinuumConfig c = spec.continuum;
            c.coupling = eta;
            const int l1 = spec.impurities.sites[0], l2 = spec.impurities.sites[1];
            row.states.reserve(nt);
            for (std::size_t n = 0; n < nt; ++n) {
                const double t = spec.times[n];
                row.rates[n] = gamma_pm(t, c, l1, l2);
                row.states.push_back(reduced_state_two_impurity_continuum(rho0, t, c, l1, l2, spec.unitary_only));
            }
            if (spec.witnesses.blp) {
                // reuse the rates computed above
                std::size_t n = 0;
                row.blp = blp_measure(
                    2,
                    [&](double) {
                        RealMatrix g(4, 4);
                        for (BasisIndex i = 0; i < 4; ++i)
                            for (BasisIndex j = 0; j < 4; ++j) g(i, j) = two_impurity_exponent(i, j, *row.rates[n]);
                        ++n;
                        return g;
                    },
                    spec.times);
            }
            break;
        }
    }
    return row;
}

inline void evaluate_cell(const SweepSpec& spec, const QubitState& rho, std::uint64_t seed, SweepCell& cell) {
    const int d = rho.qubits();
    const PauliTensor T(rho);
    BellOptions bell = spec.bell;
    bell.seed = seed;
    bell.threads = 1;

    std::optional<double> wwzb;
    if (spec.witnesses.wwzb || (spec.witnesses.pstar && d != 2)) wwzb = optimize_bell(T, Inequality::WWZB, bell).value;
    if (spec.witnesses.wwzb) cell.wwzb = wwzb;
    if (d == 3 && spec.witnesses.gtnl) cell.gtnl = optimize_bell(T, Inequality::GTNL, bell).value;
    if (d == 2 && spec.witnesses.horodecki) cell.horodecki_b = horodecki(T).b;
    if (spec.witnesses.pstar) {
        if (d == 2) {
            const auto h = horodecki(T);
            if (h.m > 1.0 + 1e-9) cell.pstar = 1.0 / std::sqrt(h.m);
        } else if (*wwzb > kWwzbThreshold) {
            cell.pstar = 1.0 / *wwzb;
        }
    }
    if (d == 3 && spec.witnesses.pstar_gtnl) {
        PStarOptions ro = spec.robustness;
        ro.bell = bell;
        cell.pstar_gtnl = pstar_bisection(rho, Inequality::GTNL, ro).value;
    }
}

}  // namespace detail

inline SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.etas.empty() || spec.times.empty()) throw ConfigError("sweep axes must not be empty");
    for (std::size_t n = 0; n < spec.times.size(); ++n)
        if (spec.times[n] < 0.0 || (n && spec.times[n] < spec.times[n - 1]))
            throw ConfigError("time axis must be non-negative and non-decreasing");
    for (double eta : spec.etas)
        if (!(eta >= 0.0)) throw ConfigError("coupling values must be non-negative");

    SweepResult result;
    result.config_hash = config_hash(spec);
    result.seed = spec.seed;
    result.solver = spec.solver;
    result.etas = spec.etas;
    result.times = spec.times;
    result.metadata = describe(spec);

    const std::size_t ne = spec.etas.size(), nt = spec.times.size();
    std::vector<detail::RowData> rows(ne);
    parallel_for(ne, [&](std::size_t e) {
        try {
            rows[e] = detail::compute_row(spec, spec.etas[e], ne == 1);
        } catch (const std::exception& ex) {
            rows[e] = {};
            rows[e].error = ex.what();
        }
    });

    result.cells.resize(ne * nt);
    parallel_for(ne * nt, [&](std::size_t idx) {
        const std::size_t e = idx / nt, n = idx % nt;
        SweepCell& cell = result.cells[idx];
        cell.solver = spec.solver;
        cell.eta = spec.etas[e];
        cell.t = spec.times[n];
        const auto& row = rows[e];
        if (!row.error.empty()) {
            cell.error = row.error;
            return;
        }
        try {
            detail::evaluate_cell(spec, row.states[n], opt::mix_seed(spec.seed, idx), cell);
            if (row.rates[n]) {
                cell.gamma0 = row.rates[n]->gamma0;
                cell.gamma_plus = row.rates[n]->plus;
                cell.gamma_minus = row.rates[n]->minus;
            }
            if (row.blp) cell.blp = row.blp->total[n];
        } catch (const std::exception& ex) {
            cell.error = ex.what();
        }
    });
    if (spec.witnesses.blp && spec.solver != Solver::Exact)
        for (auto& row : rows) result.blp.push_back(row.blp ? std::move(*row.blp) : BlpResult{});
    return result;
}

// ------------------------------- CSV ----------------------------------------

inline constexpr int kCsvSchema = 1;
inline constexpr std::string_view kCsvHeader =
    "solver,eta,t,wwzb,gtnl,horodecki_B,pstar,blp,gamma0,gamma_plus,gamma_minus";

inline void write_csv(std::ostream& os, const SweepResult& r) {
    os << "# coldbell-sweep schema=" << kCsvSchema << " config_hash=" << hex64(r.config_hash) << " seed=" << r.seed
       << '\n';
    os << kCsvHeader << '\n';
    auto field = [&](const std::optional<double>& v) {
        os << ',';
        if (v) os << format_number(*v);
    };
    for (const auto& c : r.cells) {
        os << to_string(c.solver) << ',' << format_number(c.eta) << ',' << format_number(c.t);
        field(c.wwzb);
        field(c.gtnl);
        field(c.horodecki_b);
        field(c.pstar);
        field(c.blp);
        field(c.gamma0);
        field(c.gamma_plus);
        field(c.gamma_minus);
        os << '\n';
    }
}

/// Reads a CSV written by write_csv. Only the columns of the CSV contract are
/// restored; axes are rebuilt from the distinct eta and t values in file order.
inline SweepResult read_csv(std::istream& is) {
    SweepResult r;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# coldbell-sweep", 0) != 0) throw std::runtime_error("missing sweep CSV preamble");
    {
        std::istringstream meta(line.substr(2));
        std::string token;
        int schema = -1;
        while (meta >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) continue;
            const auto key = token.substr(0, eq), value = token.substr(eq + 1);
            if (key == "schema") schema = std::stoi(value);
            if (key == "config_hash") r.config_hash = std::stoull(value, nullptr, 16);
            if (key == "seed") r.seed = std::stoull(value);
        }
        if (schema != kCsvSchema) throw std::runtime_error("unsupported sweep CSV schema");
    }
    if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("unexpected sweep CSV header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            f.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (f.size() != 11) throw std::runtime_error("sweep CSV row has " + std::to_string(f.size()) + " fields");
        SweepCell c;
        c.solver = parse_solver(f[0]);
        c.eta = std::stod(f[1]);
        c.t = std::stod(f[2]);
        auto opt = [](const std::string& s) { return s.empty() ? std::optional<double>{} : std::optional<double>{std::stod(s)}; };
        c.wwzb = opt(f[3]);
        c.gtnl = opt(f[4]);
        c.horodecki_b = opt(f[5]);
        c.pstar = opt(f[6]);
        c.blp = opt(f[7]);
        c.gamma0 = opt(f[8]);
        c.gamma_plus = opt(f[9]);
        c.gamma_minus = opt(f[10]);
        r.solver = c.solver;
        if (r.etas.empty() || r.etas.back() != c.eta) r.etas.push_back(c.eta);
        if (r.etas.size() == 1) r.times.push_back(c.t);
        r.cells.push_back(std::move(c));
    }
    return r;
}

// ------------------------------- JSON ---------------------------------------

inline nlohmann::json to_json(const SweepResult& r, bool pair_curves = true) {
    using nlohmann::json;
    json j = r.metadata;
    j["schema"] = kCsvSchema;
    j["config_hash"] = hex64(r.config_hash);
    j["seed"] = r.seed;
    j["ok"] = r.ok();
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json cells = json::array();
    for (const auto& c : r.cells) {
        json cj = {{"eta", c.eta},          {"t", c.t},
                   {"wwzb", opt(c.wwzb)},   {"gtnl", opt(c.gtnl)},
                   {"horodecki_B", opt(c.horodecki_b)}, {"pstar", opt(c.pstar)},
                   {"pstar_gtnl", opt(c.pstar_gtnl)}, {"blp", opt(c.blp)},
                   {"gamma0", opt(c.gamma0)}, {"gamma_plus", opt(c.gamma_plus)},
                   {"gamma_minus", opt(c.gamma_minus)}};
        if (!c.error.empty()) cj["error"] = c.error;
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    json blp = json::array();
    for (std::size_t e = 0; e < r.blp.size(); ++e) {
        json row = {{"total", r.blp[e].total}};
        if (e < r.etas.size()) row["eta"] = r.etas[e];
        if (pair_curves) {
            json pairs = json::array();
            for (std::size_t p = 0; p < r.blp[e].pairs.size(); ++p)
                pairs.push_back({{"i", r.blp[e].pairs[p].first}, {"j", r.blp[e].pairs[p].second}, {"curve", r.blp[e].per_pair[p]}});
            row["pairs"] = std::move(pairs);
        }
        blp.push_back(std::move(row));
    }
    j["blp"] = std::move(blp);
    return j;
}

}  // namespace coldbell
