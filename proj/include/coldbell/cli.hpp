// cli.hpp: config files, figure presets and the coldbell command-line driver

#pragma once

#include "coldbell/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace coldbell::cli {

// ------------------------------- Parsing helpers ----------------------------

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',' || ch == ' ' || ch == '\t' || ch == '[' || ch == ']') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline double to_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) throw ConfigError(what + ": '" + s + "' is not a finite number");
    return v;
}

inline long to_integer(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError(what + ": '" + s + "' is not an integer");
    return v;
}

/// Evenly spaced axis, endpoints included.
struct Axis {
    double lo = 0.0, hi = 0.0;
    std::size_t count = 1;

    std::vector<double> values() const {
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i)
            v[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        return v;
    }
};

/// "lo:hi:count" or an explicit list "v1,v2,...".
inline std::vector<double> parse_axis(const std::string& text, const std::string& what) {
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ConfigError(what + ": range must read lo:hi:count");
        const long n = to_integer(parts[2], what);
        if (n < 1) throw ConfigError(what + ": range needs at least one point");
        const Axis a{to_double(parts[0], what), to_double(parts[1], what), static_cast<std::size_t>(n)};
        if (a.hi < a.lo) throw ConfigError(what + ": range end lies below its start");
        return a.values();
    }
    std::vector<double> v;
    for (const auto& item : split_list(text)) v.push_back(to_double(item, what));
    if (v.empty()) throw ConfigError(what + ": empty axis");
    return v;
}

// ------------------------------- Config file --------------------------------

/// Contents of a key/value config file. Sections [lattice], [impurities] and
/// the optional [sweep] and [continuum]; dotted keys work at top level too.
struct FileConfig {
    LatticeConfig lattice;
    ImpurityConfig impurities;
    ContinuumConfig continuum;
    std::optional<std::vector<double>> etas, times;
    std::optional<Solver> solver;
    std::optional<InitialState> initial;
};

inline InitialState parse_initial(const std::string& s) {
    if (s == "plus") return InitialState::Plus;
    if (s == "ghz") return InitialState::Ghz;
    throw ConfigError("unknown initial state '" + s + "' (plus, ghz)");
}

inline FileConfig parse_config(std::istream& is) {
    CLI::ConfigBase reader;
    const auto items = reader.from_config(is);
    FileConfig cfg;
    std::optional<long> declared_d;
    std::map<std::string, bool> seen;
    for (const auto& item : items) {
        if (item.name == "--" || item.name == "++") continue;
        const std::string key = item.fullname();
        if (seen[key]) throw ConfigError("duplicate config key '" + key + "'");
        seen[key] = true;
        std::string joined;
        for (const auto& in : item.inputs) joined += (joined.empty() ? "" : ",") + in;
        auto one = [&] {
            const auto parts = split_list(joined);
            if (parts.size() != 1) throw ConfigError(key + ": expected a single value");
            return parts.front();
        };
        if (key == "lattice.M") cfg.lattice.sites = static_cast<int>(to_integer(one(), key));
        else if (key == "lattice.J") cfg.lattice.hopping = to_double(one(), key);
        else if (key == "lattice.U") cfg.lattice.interaction = to_double(one(), key);
        else if (key == "lattice.N") cfg.lattice.bosons = static_cast<int>(to_integer(one(), key));
        else if (key == "lattice.a") cfg.lattice.spacing = to_double(one(), key);
        else if (key == "lattice.n0_override") cfg.lattice.density_override = to_double(one(), key);
        else if (key == "impurities.d") declared_d = to_integer(one(), key);
        else if (key == "impurities.sites") {
            cfg.impurities.sites.clear();
            for (const auto& s : split_list(joined)) cfg.impurities.sites.push_back(static_cast<int>(to_integer(s, key)));
        } else if (key == "impurities.omega0") cfg.impurities.splitting = to_double(one(), key);
        else if (key == "impurities.eta") cfg.impurities.coupling = to_double(one(), key);
        else if (key == "continuum.q0") cfg.continuum.cutoff = to_double(one(), key);
        else if (key == "continuum.n0") cfg.continuum.density = to_double(one(), key);
        else if (key == "sweep.eta") cfg.etas = parse_axis(joined, key);
        else if (key == "sweep.t") cfg.times = parse_axis(joined, key);
        else if (key == "sweep.solver") cfg.solver = parse_solver(one());
        else if (key == "sweep.initial") cfg.initial = parse_initial(one());
        else throw ConfigError("unknown config key '" + key + "'");
    }
    if (declared_d) {
        if (*declared_d < 1) throw ConfigError("impurities.d must be at least 1");
        if (!seen["impurities.sites"]) {
            cfg.impurities.sites.clear();
            for (int s = 1; s <= *declared_d; ++s) cfg.impurities.sites.push_back(s);
        } else if (static_cast<std::size_t>(*declared_d) != cfg.impurities.sites.size()) {
            throw ConfigError("impurities.d disagrees with the number of sites listed");
        }
    }
    cfg.continuum.hopping = cfg.lattice.hopping;
    cfg.continuum.interaction = cfg.lattice.interaction;
    cfg.continuum.splitting = cfg.impurities.splitting;
    cfg.continuum.coupling = cfg.impurities.coupling;
    if (!seen["continuum.n0"] && cfg.lattice.density_override) cfg.continuum.density = *cfg.lattice.density_override;
    return cfg;
}

inline FileConfig load_config(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) throw ConfigError("config file '" + path + "' does not exist");
    std::ifstream is(path);
    return parse_config(is);
}

// ------------------------------- Scaling ------------------------------------

/// --scale K=V: N (boson number at fixed UN), grid (fraction of axis points),
/// restarts (optimiser restarts per cell).
struct Scale {
    std::optional<int> bosons;
    double grid = 1.0;
    std::optional<int> restarts;
};

inline Scale parse_scale(const std::vector<std::string>& entries) {
    Scale s;
    for (const auto& e : entries) {
        const auto eq = e.find('=');
        if (eq == std::string::npos) throw ConfigError("--scale expects K=V, got '" + e + "'");
        const std::string k = e.substr(0, eq), v = e.substr(eq + 1);
        if (k == "N") {
            const long n = to_integer(v, "--scale N");
            if (n < 1) throw ConfigError("--scale N must be positive");
            s.bosons = static_cast<int>(n);
        } else if (k == "grid") {
            s.grid = to_double(v, "--scale grid");
            if (!(s.grid > 0.0 && s.grid <= 1.0)) throw ConfigError("--scale grid must lie in (0, 1]");
        } else if (k == "restarts") {
            const long r = to_integer(v, "--scale restarts");
            if (r < 1) throw ConfigError("--scale restarts must be positive");
            s.restarts = static_cast<int>(r);
        } else {
            throw ConfigError("unknown --scale key '" + k + "' (N, grid, restarts)");
        }
    }
    return s;
}

/// Reduces N keeping U N fixed.
inline void rescale_bosons(LatticeConfig& lattice, int bosons) {
    lattice.interaction *= static_cast<double>(lattice.bosons) / static_cast<double>(bosons);
    lattice.bosons = bosons;
}

inline Axis thin(Axis a, double grid) {
    if (a.count > 1) a.count = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(static_cast<double>(a.count - 1) * grid)) + 1);
    return a;
}

// ------------------------------- Figure presets -----------------------------

struct FigureJob {
    std::string name;
    SweepSpec spec;
};

inline std::vector<FigureJob> figure_jobs(int figure, const Scale& scale = {}) {
    auto lattice = [](int sites, int bosons, double un) {
        LatticeConfig l;
        l.sites = sites;
        l.bosons = bosons;
        l.interaction = un / bosons;
        return l;
    };
    auto sites_upto = [](int d) {
        std::vector<int> s(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) s[static_cast<std::size_t>(i)] = i + 1;
        return s;
    };
    auto base = [&](Solver solver, Axis eta, Axis t) {
        SweepSpec s;
        s.solver = solver;
        s.etas = thin(eta, scale.grid).values();
        s.times = thin(t, scale.grid).values();
        if (scale.restarts) s.bell.restarts = *scale.restarts;
        return s;
    };
    const bool continuum = figure == 4 || figure == 5;
    if (continuum && scale.bosons) throw ConfigError("--scale N does not apply to the continuum figures");

    std::vector<FigureJob> jobs;
    switch (figure) {
        case 1: {
            SweepSpec s = base(Solver::Exact, {0.0, 0.5, 26}, {0.0, 12.0, 121});
            s.lattice = lattice(3, 100, 2.0);
            s.impurities.sites = sites_upto(3);
            s.witnesses = {.wwzb = true, .gtnl = true, .horodecki = false, .pstar = true, .pstar_gtnl = true, .blp = false};
            jobs.push_back({"figure1", s});
            break;
        }
        case 2: {
            SweepSpec s = base(Solver::Bogoliubov, {0.05, 0.05, 1}, {0.0, 40.0, 401});
            s.lattice = lattice(5, 1000, 2.0);
            s.impurities.sites = sites_upto(5);
            s.witnesses = {.wwzb = true, .gtnl = false, .horodecki = false, .pstar = true, .pstar_gtnl = false, .blp = true};
            jobs.push_back({"figure2", s});
            break;
        }
        case 3: {
            for (int m = 2; m <= 10; ++m) {
                SweepSpec s = base(Solver::Bogoliubov, {0.04, 0.04, 1}, {0.0, 20.0, 201});
                s.lattice = lattice(m, 1000, 2.0);
                s.impurities.sites = {1, m};
                s.unitary_only = true;
                s.witnesses = {.wwzb = false, .gtnl = false, .horodecki = true, .pstar = true, .pstar_gtnl = false, .blp = true};
                jobs.push_back({"figure3_M" + std::to_string(m), s});
            }
            break;
        }
        case 4:
        case 5: {
            SweepSpec s = figure == 4 ? base(Solver::Continuum, {0.03, 0.03, 1}, {0.0, 2000.0, 201})
                                      : base(Solver::Continuum, {0.03, 0.03, 1}, {0.0, 3000.0, 301});
            s.lattice.interaction = 0.04;
            s.impurities.sites = {1, 2};
            s.continuum = ContinuumConfig{};  // n0 = 1, U = 0.04, q0 = 1e-6, omega0 = 1
            s.witnesses = figure == 4
                              ? WitnessSet{.wwzb = false, .gtnl = false, .horodecki = false, .pstar = false, .pstar_gtnl = false, .blp = true}
                              : WitnessSet{.wwzb = false, .gtnl = false, .horodecki = true, .pstar = true, .pstar_gtnl = false, .blp = false};
            jobs.push_back({"figure" + std::to_string(figure), s});
            break;
        }
        default: throw ConfigError("figures are numbered 1 to 5");
    }
    if (scale.bosons)
        for (auto& j : jobs) rescale_bosons(j.spec.lattice, *scale.bosons);
    return jobs;
}

// ------------------------------- State I/O ----------------------------------

inline nlohmann::json state_to_json(const QubitState& rho) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
        std::vector<double> r(static_cast<std::size_t>(rho.dim())), m(static_cast<std::size_t>(rho.dim()));
        for (Eigen::Index j = 0; j < rho.dim(); ++j) {
            r[static_cast<std::size_t>(j)] = rho(i, j).real();
            m[static_cast<std::size_t>(j)] = rho(i, j).imag();
        }
        re.push_back(r);
        im.push_back(m);
    }
    return {{"qubits", rho.qubits()}, {"re", re}, {"im", im}};
}

inline QubitState state_from_json(const nlohmann::json& j) {
    if (!j.contains("re")) throw ConfigError("state JSON needs a 're' matrix");
    const auto& re = j.at("re");
    const auto n = static_cast<Eigen::Index>(re.size());
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = re.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != n) throw ConfigError("state matrix must be square");
        for (Eigen::Index k = 0; k < n; ++k) {
            const double im = j.contains("im") ? j["im"].at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<double>() : 0.0;
            m(i, k) = {row.at(static_cast<std::size_t>(k)).get<double>(), im};
        }
    }
    return QubitState::from_matrix(std::move(m));
}

// ------------------------------- Summary ------------------------------------

struct Summary {
    std::size_t cells = 0, failed = 0;
    std::optional<double> max_violation, pstar_min, blp_final;
};

inline Summary summarize(const SweepResult& r) {
    Summary s;
    auto upd_max = [](std::optional<double>& a, double v) { a = a ? std::max(*a, v) : v; };
    for (const auto& c : r.cells) {
        ++s.cells;
        if (!c.error.empty()) {
            ++s.failed;
            continue;
        }
        if (c.wwzb) upd_max(s.max_violation, *c.wwzb - 1.0);
        if (c.gtnl) upd_max(s.max_violation, *c.gtnl);
        if (c.horodecki_b) upd_max(s.max_violation, *c.horodecki_b);
        if (c.pstar) s.pstar_min = s.pstar_min ? std::min(*s.pstar_min, *c.pstar) : *c.pstar;
    }
    for (const auto& b : r.blp)
        if (!b.total.empty()) upd_max(s.blp_final, b.total.back());
    return s;
}

inline std::string summary_line(const std::string& name, const Summary& s) {
    auto f = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("na"); };
    return name + ": cells=" + std::to_string(s.cells) + " failed=" + std::to_string(s.failed) +
           " max_violation=" + f(s.max_violation) + " pstar_min=" + f(s.pstar_min) + " blp_final=" + f(s.blp_final);
}

// ------------------------------- Driver -------------------------------------

struct ErrorReport {
    std::string kind, message;
    nlohmann::json detail = nullptr;
};

inline void print_error(std::ostream& err, const ErrorReport& e) {
    nlohmann::json j = {{"error", {{"type", e.kind}, {"message", e.message}}}};
    if (!e.detail.is_null()) j["error"]["detail"] = e.detail;
    err << j.dump() << '\n';
}

struct Options {
    std::string config, out = ".", state_path, solver, initial = "plus", eta, t_axis, witnesses;
    std::vector<std::string> scale;
    std::uint64_t seed = 0;
    double t = 0.0;
    bool unitary_only = false;
    bool exact_ground_state = false;
};

inline WitnessSet parse_witnesses(const std::string& list) {
    WitnessSet w{.wwzb = false, .gtnl = false, .horodecki = false, .pstar = false, .pstar_gtnl = false, .blp = false};
    for (const auto& name : split_list(list)) {
        if (name == "wwzb") w.wwzb = true;
        else if (name == "gtnl") w.gtnl = true;
        else if (name == "horodecki") w.horodecki = true;
        else if (name == "pstar") w.pstar = true;
        else if (name == "pstar_gtnl") w.pstar_gtnl = true;
        else if (name == "blp") w.blp = true;
        else throw ConfigError("unknown witness '" + name + "'");
    }
    return w;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    os << text;
}

/// Runs one sweep job, writes NAME.csv and NAME.json, returns whether every cell succeeded.
inline bool emit_sweep(const std::string& name, const SweepSpec& spec, const Options& o, std::ostream& out, std::ostream& err) {
    const SweepResult r = run_sweep(spec);
    std::ostringstream csv;
    write_csv(csv, r);
    const std::filesystem::path dir(o.out);
    write_file(dir / (name + ".csv"), csv.str());
    write_file(dir / (name + ".json"), to_json(r).dump(1) + "\n");
    const Summary s = summarize(r);
    out << summary_line(name, s) << '\n';
    if (s.failed) {
        nlohmann::json failures = nlohmann::json::array();
        for (const auto& c : r.cells)
            if (!c.error.empty()) failures.push_back({{"eta", c.eta}, {"t", c.t}, {"message", c.error}});
        print_error(err, {"cell_failure", name + ": " + std::to_string(s.failed) + " cells failed", failures});
    }
    return s.failed == 0;
}

inline SweepSpec spec_from_config(const FileConfig& cfg, const Options& o) {
    SweepSpec s;
    s.lattice = cfg.lattice;
    s.impurities = cfg.impurities;
    s.continuum = cfg.continuum;
    s.solver = cfg.solver.value_or(Solver::Bogoliubov);
    s.initial = cfg.initial.value_or(InitialState::Plus);
    if (!o.solver.empty()) s.solver = parse_solver(o.solver);
    s.etas = cfg.etas.value_or(std::vector<double>{cfg.impurities.coupling});
    s.times = cfg.times.value_or(std::vector<double>{0.0});
    if (!o.eta.empty()) s.etas = parse_axis(o.eta, "--eta");
    if (!o.t_axis.empty()) s.times = parse_axis(o.t_axis, "--t");
    s.unitary_only = o.unitary_only;
    s.seed = o.seed;
    const int d = static_cast<int>(s.impurities.sites.size());
    s.witnesses = {.wwzb = d != 2, .gtnl = d == 3, .horodecki = d == 2, .pstar = true, .pstar_gtnl = false,
                   .blp = s.solver != Solver::Exact};
    if (!o.witnesses.empty()) s.witnesses = parse_witnesses(o.witnesses);
    return s;
}

inline QubitState evolve_state(const FileConfig& cfg, Solver solver, const QubitState& rho0, double t, bool unitary_only) {
    switch (solver) {
        case Solver::Exact: {
            if (unitary_only) throw ConfigError("the exact solver has no separable unitary part");
            return ExactSolver(validate_config(cfg.lattice, cfg.impurities)).evolve(rho0, t);
        }
        case Solver::Bogoliubov:
            return BogoliubovSolution(validate_config(cfg.lattice, cfg.impurities)).evolve(rho0, t, unitary_only);
        case Solver::Continuum: {
            if (cfg.impurities.sites.size() != 2) throw ConfigError("the continuum solver handles exactly two impurities");
            return reduced_state_two_impurity_continuum(rho0, t, cfg.continuum, cfg.impurities.sites[0],
                                                        cfg.impurities.sites[1], unitary_only);
        }
    }
    throw ConfigError("unknown solver");
}

inline nlohmann::json bell_report(const QubitState& rho, std::uint64_t seed) {
    BellOptions bo;
    bo.seed = seed;
    nlohmann::json j = {{"qubits", rho.qubits()}};
    const int d = rho.qubits();
    if (d >= 2) {
        const auto w = pstar(rho, Inequality::WWZB, {.bell = bo});
        j["wwzb"] = w.witness;
        j["pstar_wwzb"] = w.value ? nlohmann::json(*w.value) : nlohmann::json(nullptr);
    }
    if (d == 2) {
        const auto h = horodecki(rho);
        j["horodecki_M"] = h.m;
        j["horodecki_B"] = h.b;
        j["chsh"] = optimize_bell(rho, Inequality::CHSH, bo).value;
        const auto p = pstar(rho, Inequality::CHSH, {.bell = bo});
        j["pstar_chsh"] = p.value ? nlohmann::json(*p.value) : nlohmann::json(nullptr);
    }
    if (d == 3) {
        const auto g = pstar(rho, Inequality::GTNL, {.bell = bo});
        j["gtnl"] = g.witness;
        j["pstar_gtnl"] = g.value ? nlohmann::json(*g.value) : nlohmann::json(nullptr);
    }
    return j;
}

/// Entry point shared by the executable and the tests. Exit codes: 0 success,
/// 1 runtime failure, 2 invalid input, 3 some sweep cells failed.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Bell nonlocality of impurity qubits in an ultracold Bose gas"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool sweep_axes) {
        sub->add_option("--config", o.config, "key/value config file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--seed", o.seed, "master seed for the optimiser restarts");
        sub->add_option("--solver", o.solver, "exact, bogoliubov or continuum")
            ->check(CLI::IsMember({"exact", "bogoliubov", "continuum"}));
        sub->add_flag("--unitary-only", o.unitary_only, "drop the dephasing, keep the phases");
        if (sweep_axes) {
            sub->add_option("--eta", o.eta, "coupling axis lo:hi:count or list");
            sub->add_option("--t", o.t_axis, "time axis lo:hi:count or list");
            sub->add_option("--witnesses", o.witnesses, "comma list of wwzb,gtnl,horodecki,pstar,pstar_gtnl,blp");
        }
    };

    auto* spectrum = app.add_subcommand("spectrum", "quasiparticle spectrum and exact ground-state energy");
    common(spectrum, false);
    spectrum->add_flag("--exact", o.exact_ground_state, "also diagonalise the Bose-Hubbard ring");

    auto* evolve = app.add_subcommand("evolve", "reduced qubit state at one time");
    common(evolve, false);
    evolve->add_option("--t", o.t, "evolution time in units of 1/J");
    evolve->add_option("--initial", o.initial, "plus or ghz")->check(CLI::IsMember({"plus", "ghz"}));

    auto* bell = app.add_subcommand("bell", "witness values and robustness of a state");
    common(bell, false);
    bell->add_option("--state", o.state_path, "state JSON with 're' and 'im' matrices")->check(CLI::ExistingFile);
    bell->add_option("--t", o.t, "evolve the configured model to this time first");
    bell->add_option("--initial", o.initial, "plus or ghz")->check(CLI::IsMember({"plus", "ghz"}));

    auto* sweep = app.add_subcommand("sweep", "(eta, t) grid from a config file");
    common(sweep, true);

    std::vector<CLI::App*> figures;
    for (int f = 1; f <= 5; ++f) {
        auto* fig = app.add_subcommand("figure" + std::to_string(f), "figure " + std::to_string(f) + " data");
        fig->add_option("--out", o.out, "output directory");
        fig->add_option("--seed", o.seed, "master seed for the optimiser restarts");
        fig->add_option("--scale", o.scale, "K=V reductions: N, grid, restarts")->expected(1, -1);
        figures.push_back(fig);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        print_error(err, {"usage", e.what()});
        return 2;
    }

    try {
        for (int f = 1; f <= 5; ++f) {
            if (!figures[static_cast<std::size_t>(f - 1)]->parsed()) continue;
            bool ok = true;
            for (auto& job : figure_jobs(f, parse_scale(o.scale))) {
                job.spec.seed = o.seed;
                ok = emit_sweep(job.name, job.spec, o, out, err) && ok;
            }
            return ok ? 0 : 3;
        }

        const FileConfig cfg = o.config.empty() ? FileConfig{} : load_config(o.config);
        const Solver solver = o.solver.empty() ? cfg.solver.value_or(Solver::Bogoliubov) : parse_solver(o.solver);
        const std::filesystem::path dir(o.out);

        if (spectrum->parsed()) {
            const Model model = validate_config(cfg.lattice, cfg.impurities);
            nlohmann::json j = {{"n0", model.density}, {"omega0_bar", model.renormalised_splitting}};
            nlohmann::json modes = nlohmann::json::array();
            for (const auto& m : bogoliubov_modes(model))
                modes.push_back({{"k", m.k}, {"epsilon", m.epsilon}, {"omega", m.omega}});
            j["modes"] = modes;
            if (o.exact_ground_state) {
                const FockBasis basis(model.lattice.sites, model.lattice.bosons);
                const auto gs = ground_state(build_bh_hamiltonian(basis, model.lattice.hopping, model.lattice.interaction));
                j["fock_dimension"] = basis.size();
                j["ground_energy"] = gs.energy;
            }
            write_file(dir / "spectrum.json", j.dump(1) + "\n");
            out << "spectrum: modes=" << modes.size() << " omega_min="
                << (modes.empty() ? std::string("na") : format_number(modes.front()["omega"].get<double>())) << '\n';
            return 0;
        }
        if (evolve->parsed() || (bell->parsed() && o.state_path.empty())) {
            if (o.t < 0.0) throw ConfigError("--t must be non-negative");
            const QubitState rho0 = initial_state(parse_initial(o.initial), static_cast<int>(cfg.impurities.sites.size()));
            const QubitState rho = evolve_state(cfg, solver, rho0, o.t, o.unitary_only);
            if (evolve->parsed()) {
                nlohmann::json j = state_to_json(rho);
                j["t"] = o.t;
                j["solver"] = std::string(to_string(solver));
                write_file(dir / "state.json", j.dump(1) + "\n");
                out << "evolve: t=" << format_number(o.t) << " trace_distance_from_initial="
                    << format_number(trace_distance(rho, rho0)) << '\n';
                return 0;
            }
            const auto j = bell_report(rho, o.seed);
            write_file(dir / "bell.json", j.dump(1) + "\n");
            out << "bell: " << j.dump() << '\n';
            return 0;
        }
        if (bell->parsed()) {
            std::ifstream is(o.state_path);
            const QubitState rho = state_from_json(nlohmann::json::parse(is));
            const auto j = bell_report(rho, o.seed);
            write_file(dir / "bell.json", j.dump(1) + "\n");
            out << "bell: " << j.dump() << '\n';
            return 0;
        }
        if (sweep->parsed()) return emit_sweep("sweep", spec_from_config(cfg, o), o, out, err) ? 0 : 3;
    } catch (const ConfigError& e) {
        print_error(err, {"config", e.what()});
        return 2;
    } catch (const StateError& e) {
        print_error(err, {"state", e.what()});
        return 2;
    } catch (const nlohmann::json::exception& e) {
        print_error(err, {"json", e.what()});
        return 2;
    } catch (const std::exception& e) {
        print_error(err, {"runtime", e.what()});
        return 1;
    }
    return 0;
}

}  // namespace coldbell::cli
