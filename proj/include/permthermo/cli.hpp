// Batch front end: option parsing (flags, key=value tokens, JSON config
// file), command dispatch and deterministic CSV/JSON output. Kept in a
// header so the test suite can drive run() directly.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permthermo/asymptotics.hpp"
#include "permthermo/lindblad.hpp"
#include "permthermo/otto.hpp"
#include "permthermo/thermo.hpp"

#ifndef PERMTHERMO_VERSION
#define PERMTHERMO_VERSION "0.1.0"
#endif

namespace permthermo::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergence = 3;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& commands()
{
    static const std::vector<std::string> c{"irreps",           "thermo",
                                            "otto",             "otto-scan",
                                            "lindblad-verify",  "asymptotics-energy",
                                            "asymptotics-entropy", "irrep-terms"};
    return c;
}

struct OptionSpec {
    const char* key;
    const char* help;
};

inline const std::vector<OptionSpec>& option_specs()
{
    static const std::vector<OptionSpec> o{
        {"n", "particle number"},
        {"kind", "sud or spin"},
        {"d", "local dimension for kind=sud"},
        {"s", "spin for kind=spin, e.g. 1/2 or 1"},
        {"spectrum", "ladder | two-level | h-delta | levels"},
        {"levels", "comma-separated single-particle levels (spectrum=levels)"},
        {"delta", "gap parameter for spectrum=h-delta"},
        {"upper-heavy", "two-level: put the odd level on top (true/false)"},
        {"beta0", "preparation inverse temperature (inf allowed)"},
        {"beta", "bath inverse temperature grid start:stop:count or list"},
        {"betah", "hot-bath inverse temperature grid"},
        {"betac", "cold-bath inverse temperature grid"},
        {"kappa", "compression factor"},
        {"gamma", "base dissipation rate"},
        {"include-zero-frequency", "keep omega=0 jump components (true/false)"},
        {"seeds", "number of random initial states (lindblad-verify)"},
        {"seed", "master seed"},
        {"samples", "Monte Carlo sample count"},
        {"dmin", "smallest d (asymptotics-energy)"},
        {"dmax", "largest d (asymptotics-energy)"},
        {"ns", "particle-number grid (asymptotics-entropy)"},
        {"per-irrep", "add per-irrep columns to thermo output (true/false)"},
        {"max-steps", "integrator step budget"},
        {"output", "output path, '-' for stdout"},
        {"format", "csv or json"},
    };
    return o;
}

// ---------------------------------------------------------------------------
// option values

/// Raw option values after merging the config file and the command line.
using OptionMap = std::map<std::string, std::string>;

inline std::string format_double(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& key, const std::string& text)
{
    if (text == "inf" || text == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + text + "' as a number");
    }
}

inline long parse_long(const std::string& key, const std::string& text)
{
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(text, &pos);
        if (pos != text.size())
            throw std::invalid_argument("trailing characters");
        return static_cast<long>(v);
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + text + "' as an integer");
    }
}

inline bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

/// "start:stop:count" (inclusive, evenly spaced) or a comma-separated list;
/// values must be finite and strictly increasing.
inline std::vector<double> parse_grid(const std::string& key, const std::string& text)
{
    std::vector<double> g;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> f;
        std::stringstream ss(text);
        for (std::string part; std::getline(ss, part, ':');)
            f.push_back(part);
        if (f.size() != 3)
            throw ConfigError(key + ": grid must be start:stop:count");
        const double a = parse_double(key, f[0]), b = parse_double(key, f[1]);
        const long count = parse_long(key, f[2]);
        if (count < 1)
            throw ConfigError(key + ": grid count must be >= 1");
        if (count == 1)
            g.push_back(a);
        for (long k = 0; count > 1 && k < count; ++k)
            g.push_back(a + (b - a) * k / (count - 1.0));
    } else {
        std::stringstream ss(text);
        for (std::string part; std::getline(ss, part, ',');)
            g.push_back(parse_double(key, part));
    }
    if (g.empty())
        throw ConfigError(key + ": empty grid");
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::isfinite(g[k]))
            throw ConfigError(key + ": grid values must be finite");
        if (k > 0 && !(g[k] > g[k - 1]))
            throw ConfigError(key + ": grid must be strictly increasing");
    }
    return g;
}

inline std::vector<int> parse_int_grid(const std::string& key, const std::string& text)
{
    std::vector<int> out;
    for (double v : parse_grid(key, text)) {
        if (v != std::floor(v))
            throw ConfigError(key + ": expected integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

/// Typed view of an OptionMap; records which keys were read so unused
/// options can be rejected.
class Options {
public:
    explicit Options(OptionMap m) : m_(std::move(m)) {}

    bool has(const std::string& k) const { return m_.count(k) > 0; }
    std::string str(const std::string& k, const std::string& def) const { return has(k) ? get(k) : def; }
    double num(const std::string& k, double def) const { return has(k) ? parse_double(k, get(k)) : def; }
    double num(const std::string& k) const { return parse_double(k, require(k)); }
    long integer(const std::string& k, long def) const { return has(k) ? parse_long(k, get(k)) : def; }
    long integer(const std::string& k) const { return parse_long(k, require(k)); }
    bool flag(const std::string& k, bool def) const { return has(k) ? parse_bool(k, get(k)) : def; }
    std::vector<double> grid(const std::string& k) const { return parse_grid(k, require(k)); }
    std::vector<double> grid(const std::string& k, const std::string& def) const
    {
        return parse_grid(k, has(k) ? get(k) : def);
    }

    const OptionMap& raw() const { return m_; }

    void reject_unused() const
    {
        for (const auto& [k, v] : m_)
            if (!used_.count(k) && k != "output" && k != "format" && k != "config")
                throw ConfigError("option '" + k + "' is not used by this command");
    }

private:
    const std::string& get(const std::string& k) const
    {
        used_[k] = true;
        return m_.at(k);
    }
    const std::string& require(const std::string& k) const
    {
        if (!has(k))
            throw ConfigError("missing required option '" + k + "'");
        return get(k);
    }

    OptionMap m_;
    mutable std::map<std::string, bool> used_;
};

// ---------------------------------------------------------------------------
// tabular output

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string cell_text(const Cell& c)
{
    if (std::holds_alternative<long long>(c))
        return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<double>(c))
        return format_double(std::get<double>(c));
    if (std::holds_alternative<std::string>(c))
        return std::get<std::string>(c);
    return "";
}

inline json cell_json(const Cell& c)
{
    if (std::holds_alternative<long long>(c))
        return std::get<long long>(c);
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        return std::isfinite(v) ? json(v) : json(format_double(v));
    }
    if (std::holds_alternative<std::string>(c))
        return std::get<std::string>(c);
    return nullptr;
}

inline std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s)
        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

struct Output {
    std::string command;
    json metadata;
    std::optional<Table> table;
    std::optional<json> report; ///< structured result instead of a table
};

inline void write_output(const Output& out, const std::string& format, std::ostream& os)
{
    if (format == "json") {
        json doc;
        doc["metadata"] = out.metadata;
        if (out.table) {
            doc["columns"] = out.table->columns;
            json rows = json::array();
            for (const auto& r : out.table->rows) {
                json row = json::object();
                for (std::size_t k = 0; k < r.size(); ++k)
                    row[out.table->columns[k]] = cell_json(r[k]);
                rows.push_back(std::move(row));
            }
            doc["rows"] = std::move(rows);
        }
        if (out.report)
            doc["report"] = *out.report;
        os << doc.dump(2) << "\n";
        return;
    }
    for (const auto& [k, v] : out.metadata.items())
        os << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    if (out.table) {
        for (std::size_t k = 0; k < out.table->columns.size(); ++k)
            os << (k ? "," : "") << csv_quote(out.table->columns[k]);
        os << "\n";
        for (const auto& r : out.table->rows) {
            for (std::size_t k = 0; k < r.size(); ++k)
                os << (k ? "," : "") << csv_quote(cell_text(r[k]));
            os << "\n";
        }
    }
    if (out.report) // reports are nested; in CSV mode they travel as one JSON line
        os << "# report: " << out.report->dump() << "\n";
}

// ---------------------------------------------------------------------------
// ensemble construction

struct EnsembleChoice {
    SymmetryKind kind = SymmetryKind::sud;
    int n = 1;
    int d = 2;
    HalfInt s = HalfInt::from_twice(1);
    SpectrumSpec spectrum;
};

inline SpectrumSpec spectrum_from(const Options& o, int d)
{
    const std::string name = o.str("spectrum", "ladder");
    if (name == "ladder")
        return SpectrumSpec::ladder(d);
    if (name == "two-level")
        return SpectrumSpec::two_level(d, o.flag("upper-heavy", true));
    if (name == "h-delta") {
        if (d != 3)
            throw ConfigError("spectrum=h-delta requires d=3");
        return SpectrumSpec::h_delta(o.num("delta"));
    }
    if (name == "levels") {
        std::vector<double> lv;
        std::stringstream ss(o.str("levels", ""));
        for (std::string part; std::getline(ss, part, ',');)
            lv.push_back(parse_double("levels", part));
        if (static_cast<int>(lv.size()) != d)
            throw ConfigError("levels: expected " + std::to_string(d) + " values");
        return SpectrumSpec::from_levels(lv, true);
    }
    throw ConfigError("spectrum: unknown value '" + name + "'");
}

inline EnsembleChoice ensemble_from(const Options& o)
{
    EnsembleChoice c;
    c.n = static_cast<int>(o.integer("n"));
    if (c.n < 1)
        throw ConfigError("n must be >= 1");
    const std::string kind = o.str("kind", "sud");
    if (kind == "sud") {
        c.kind = SymmetryKind::sud;
        c.d = static_cast<int>(o.integer("d", 3));
        if (c.d < 2)
            throw ConfigError("d must be >= 2");
        c.spectrum = spectrum_from(o, c.d);
    } else if (kind == "spin") {
        c.kind = SymmetryKind::spin;
        try {
            c.s = parse_half_int(o.str("s", "1/2"));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("s: ") + e.what());
        }
        if (c.s.twice < 1)
            throw ConfigError("s must be >= 1/2");
        c.d = c.s.twice + 1;
        c.spectrum = SpectrumSpec::spin_z(c.s);
    } else {
        throw ConfigError("kind must be sud or spin");
    }
    return c;
}

inline Ensemble make_ensemble(const EnsembleChoice& c)
{
    return c.kind == SymmetryKind::sud ? Ensemble::sud(c.n, c.spectrum) : Ensemble::spin(c.n, c.s);
}

inline json ensemble_metadata(const EnsembleChoice& c)
{
    json m;
    m["kind"] = to_string(c.kind);
    m["n"] = c.n;
    if (c.kind == SymmetryKind::sud)
        m["d"] = c.d;
    else
        m["s"] = c.s.to_string();
    json lv = json::array();
    for (double e : c.spectrum.levels())
        lv.push_back(e);
    m["levels"] = lv;
    if (c.spectrum.shift() != 0.0)
        m["level_shift_applied"] = c.spectrum.shift();
    return m;
}

// ---------------------------------------------------------------------------
// commands

inline Output cmd_irreps(const Options& o)
{
    const EnsembleChoice c = ensemble_from(o);
    Output out;
    out.metadata["ensemble"] = ensemble_metadata(c);
    Table t;
    if (c.kind == SymmetryKind::sud) {
        t.columns = {"lambda", "dim", "mult", "plancherel"};
        for (const auto& p : enumerate_partitions(c.n, c.d))
            t.rows.push_back({p.to_string(), irrep_dimension_exact(p).str(), irrep_multiplicity_exact(p).str(),
                              plancherel_prob(p)});
    } else {
        t.columns = {"J", "dim", "mult", "plancherel"};
        const auto mult = spin_multiplicities(c.n, c.s);
        std::map<HalfInt, double> prob;
        for (const auto& [J, p] : spin_plancherel(c.n, c.s))
            prob[J] = p;
        for (const auto& [J, m] : mult)
            t.rows.push_back({J.to_string(), static_cast<long long>(J.twice + 1), m.str(), prob.at(J)});
    }
    out.table = std::move(t);
    return out;
}

inline Output cmd_thermo(const Options& o)
{
    const EnsembleChoice c = ensemble_from(o);
    const Ensemble ens = make_ensemble(c);
    const double beta0 = o.num("beta0");
    if (!(beta0 >= 0.0))
        throw ConfigError("beta0 must be >= 0");
    const auto betas = o.grid("beta");
    if (betas.front() < 0.0)
        throw ConfigError("beta grid must be >= 0");
    const bool per_irrep = o.flag("per-irrep", false);
    Output out;
    out.metadata["ensemble"] = ensemble_metadata(c);
    Table t;
    t.columns = {"beta", "energy", "reduced_entropy", "reduced_free_energy", "d_entropy", "d_free_energy",
                 "energy_eq", "d_entropy_eq", "d_free_energy_eq"};
    if (per_irrep)
        for (const auto& b : ens.blocks()) {
            t.columns.push_back("p" + b.label);
            t.columns.push_back("d_free_energy" + b.label);
        }
    const bool finite_ref = std::isfinite(beta0);
    std::optional<ThermoPoint> ref;
    if (finite_ref)
        ref = steady_state_quantities(ens, beta0, beta0);
    for (double beta : betas) {
        const ThermoPoint tp = steady_state_quantities(ens, beta, beta0);
        const ThermoPoint eq = steady_state_quantities(ens, beta, beta);
        std::vector<Cell> row{beta, tp.energy, tp.reduced_entropy};
        row.push_back(tp.reduced_free_energy ? Cell(*tp.reduced_free_energy) : Cell());
        std::optional<RelaxationChanges> ch;
        if (finite_ref && beta > 0.0)
            ch = relaxation_changes(ens, beta, beta0);
        row.push_back(finite_ref ? Cell(tp.reduced_entropy - ref->reduced_entropy) : Cell());
        row.push_back(ch ? Cell(ch->delta_free_energy) : Cell());
        row.push_back(eq.energy);
        row.push_back(finite_ref ? Cell(eq.reduced_entropy - ref->reduced_entropy) : Cell());
        if (finite_ref && beta > 0.0)
            row.push_back(*eq.reduced_free_energy - (ref->energy - ref->reduced_entropy / beta));
        else
            row.push_back(Cell());
        if (per_irrep)
            for (std::size_t i = 0; i < ens.blocks().size(); ++i) {
                row.push_back(tp.per_irrep[i].probability);
                row.push_back(ch ? Cell(ch->per_irrep_delta_free_energy[i]) : Cell());
            }
        t.rows.push_back(std::move(row));
    }
    out.table = std::move(t);
    return out;
}

inline Output cmd_irrep_terms(const Options& o)
{
    const EnsembleChoice c = ensemble_from(o);
    const Ensemble ens = make_ensemble(c);
    const double beta0 = o.num("beta0");
    if (!(beta0 >= 0.0) || std::isinf(beta0))
        throw ConfigError("beta0 must be finite and >= 0");
    const auto betas = o.grid("beta");
    if (!(betas.front() > 0.0))
        throw ConfigError("beta grid must be > 0");
    Output out;
    out.metadata["ensemble"] = ensemble_metadata(c);
    Table t;
    t.columns = {"beta", "irrep", "dim", "probability", "d_free_energy", "weighted_d_free_energy", "symmetric"};
    for (double beta : betas) {
        const RelaxationChanges ch = relaxation_changes(ens, beta, beta0);
        const auto p = block_probabilities(ens, beta0);
        for (std::size_t i = 0; i < ens.blocks().size(); ++i) {
            const Block& b = ens.blocks()[i];
            t.rows.push_back({beta, b.label, b.dim, p[i], ch.per_irrep_delta_free_energy[i],
                              p[i] * ch.per_irrep_delta_free_energy[i], static_cast<long long>(b.symmetric)});
        }
    }
    out.table = std::move(t);
    return out;
}

inline OttoParams otto_params(double beta_h, double beta_c, double kappa, double beta0)
{
    OttoParams op{beta_h, beta_c, kappa, beta0};
    try {
        op.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + " (beta_h=" + format_double(beta_h) +
                          ", beta_c=" + format_double(beta_c) + ")");
    }
    return op;
}

inline Output cmd_otto(const Options& o)
{
    const EnsembleChoice c = ensemble_from(o);
    const Ensemble ens = make_ensemble(c);
    const double beta0 = o.num("beta0");
    const double kappa = o.num("kappa", 0.5);
    const auto bcs = o.grid("betac");
    const auto bhs = o.grid("betah");
    Output out;
    out.metadata["ensemble"] = ensemble_metadata(c);
    Table t;
    t.columns = {"betac", "betah", "w_col", "w_dis", "ratio", "ratio_limit"};
    const double limit = work_ratio_limit(c.n, c.d, c.kind);
    for (double bc : bcs)
        for (double bh : bhs) {
            const OttoParams op = otto_params(bh, bc, kappa, beta0);
            const double wc = collective_work(ens, op), wd = distinguishable_work(ens, op);
            t.rows.push_back({bc, bh, wc, wd, wd != 0.0 ? Cell(wc / wd) : Cell(), limit});
        }
    out.table = std::move(t);
    return out;
}

inline Output cmd_otto_scan(const Options& o)
{
    const int n = static_cast<int>(o.integer("n"));
    if (n < 1)
        throw ConfigError("n must be >= 1");
    if (o.str("kind", "sud") != "sud" || o.integer("d", 3) != 3)
        throw ConfigError("otto-scan uses the three-level family: kind=sud, d=3");
    const double beta0 = o.num("beta0");
    const double kappa = o.num("kappa", 0.5);
    const double bh = o.num("betah");
    const auto bcs = o.grid("betac");
    const auto deltas = o.grid("delta", "0:2:21");
    if (deltas.front() < 0.0 || deltas.back() > 2.0)
        throw ConfigError("delta grid must lie in [0, 2]");
    Output out;
    out.metadata["n"] = n;
    Table t;
    t.columns = {"betac", "delta", "w_col", "w_dis"};
    for (double bc : bcs) {
        const OttoParams op = otto_params(bh, bc, kappa, beta0);
        for (double dl : deltas) {
            const Ensemble ens = Ensemble::sud(n, parameterised_hamiltonian(dl));
            t.rows.push_back({bc, dl, collective_work(ens, op), distinguishable_work(ens, op)});
        }
    }
    out.table = std::move(t);
    return out;
}

inline Output cmd_lindblad_verify(const Options& o)
{
    const EnsembleChoice c = ensemble_from(o);
    const double beta = o.num("beta");
    const double beta0 = o.num("beta0");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ConfigError("beta must be finite and > 0");
    if (!(beta0 >= 0.0) || !std::isfinite(beta0))
        throw ConfigError("beta0 must be finite and >= 0");
    const long seeds = o.integer("seeds", 3);
    const std::uint64_t seed = static_cast<std::uint64_t>(o.integer("seed", 1));
    RateModel rates{o.num("gamma", 1.0), beta, o.flag("include-zero-frequency", false)};
    IntegratorOptions iopt;
    iopt.max_steps = o.integer("max-steps", iopt.max_steps);

    std::optional<CollectiveSystem> sys;
    try {
        sys = c.kind == SymmetryKind::sud ? CollectiveSystem::sud(c.n, c.spectrum) : CollectiveSystem::spin(c.n, c.s);
    } catch (const std::length_error& e) {
        throw ConfigError(e.what());
    }
    if (c.kind == SymmetryKind::sud && c.n > kMaxProjectorN)
        throw ConfigError("lindblad-verify: isotypic projectors need n <= 6");
    const Ensemble ens = make_ensemble(c);
    const Lindbladian L(*sys, rates);
    const auto proj = isotypic_projectors(*sys);
    const Eigen::VectorXd& h = sys->energies();

    json rep;
    rep["dim"] = sys->dim();
    if (sys->dim() <= kMaxDenseSuperoperatorDim)
        rep["nullspace_dim"] = nullspace_dimension(L.superoperator());
    else
        rep["nullspace_dim"] = nullptr;
    rep["symmetric_count"] = symmetric_nullspace_count(ens);
    rep["commutant_dim"] = block_commutant_dimension(ens);

    auto run = [&](const Matrix& rho0) {
        Trajectory tr;
        const auto res = steady_state(L, rho0, iopt, trajectory_recorder(tr, proj, h, beta));
        const auto bg = verify_block_gibbs(res.rho, beta, proj, h);
        json r;
        r["steps"] = res.steps;
        r["residual"] = res.residual;
        r["block_gibbs_max_residual"] = bg.max_residual();
        r["population_drift"] = population_drift(tr);
        r["spohn_monotone"] = spohn_monotonicity(tr);
        r["energy"] = state_energy(res.rho, h);
        json blocks = json::array();
        for (const auto& b : bg.blocks)
            blocks.push_back({{"label", b.label},
                              {"population", b.population},
                              {"commutator", b.commutator},
                              {"gibbs_deviation", b.gibbs_deviation}});
        r["blocks"] = blocks;
        return r;
    };

    json gib = run(gibbs_state(h, beta0));
    const double formula = steady_state_quantities(ens, beta, beta0).energy;
    gib["energy_formula"] = formula;
    gib["energy_abs_diff"] = std::abs(gib["energy"].get<double>() - formula);
    rep["gibbs_start"] = gib;
    json rnd = json::array();
    for (long k = 0; k < seeds; ++k) {
        json r = run(random_density_matrix(sys->dim(), seed + k));
        r["seed"] = seed + k;
        rnd.push_back(std::move(r));
    }
    rep["random_starts"] = rnd;

    Output out;
    out.metadata["ensemble"] = ensemble_metadata(c);
    out.report = std::move(rep);
    return out;
}

inline Output cmd_asymptotics_energy(const Options& o)
{
    const int dmin = static_cast<int>(o.integer("dmin", 2));
    const int dmax = static_cast<int>(o.integer("dmax", 7));
    if (dmin < 2 || dmax > 7 || dmin > dmax)
        throw ConfigError("need 2 <= dmin <= dmax <= 7");
    const long samples = o.integer("samples", 1000000);
    if (samples < 2)
        throw ConfigError("samples must be >= 2");
    const std::uint64_t seed = static_cast<std::uint64_t>(o.integer("seed", 1));
    Output out;
    Table t;
    t.columns = {"d", "coefficient", "std_error", "method", "samples"};
    for (int d = dmin; d <= dmax; ++d) {
        const auto e = energy_coefficient(d, samples, seed);
        t.rows.push_back({static_cast<long long>(d), e.value, e.std_error,
                          std::string(e.quadrature ? "quadrature" : "monte-carlo"), static_cast<long long>(e.samples)});
    }
    out.table = std::move(t);
    return out;
}

inline Output cmd_asymptotics_entropy(const Options& o)
{
    const std::string kind = o.str("kind", "sud");
    const auto ns = parse_int_grid("ns", o.str("ns", "10,100,1000"));
    if (ns.front() < 1)
        throw ConfigError("ns must be >= 1");
    Output out;
    Table t;
    t.columns = {"n", "exact", "asymptote", "ratio"};
    if (kind == "sud") {
        const int d = static_cast<int>(o.integer("d", 2));
        if (d < 2)
            throw ConfigError("d must be >= 2");
        out.metadata["kind"] = "sud";
        out.metadata["d"] = d;
        for (int n : ns) {
            const double ex = exact_entropy_infinite_temperature(n, d), as = entropy_asymptote(d, n);
            t.rows.push_back({static_cast<long long>(n), ex, as, as > 0.0 ? Cell(ex / as) : Cell()});
        }
    } else if (kind == "spin") {
        HalfInt s;
        try {
            s = parse_half_int(o.str("s", "1"));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("s: ") + e.what());
        }
        out.metadata["kind"] = "spin";
        out.metadata["s"] = s.to_string();
        // J grows like √n for every s, so the leading term is ½ ln n
        for (int n : ns) {
            const double ex = exact_spin_entropy_infinite_temperature(n, s), as = 0.5 * std::log(n);
            t.rows.push_back({static_cast<long long>(n), ex, as, as > 0.0 ? Cell(ex / as) : Cell()});
        }
    } else {
        throw ConfigError("kind must be sud or spin");
    }
    out.table = std::move(t);
    return out;
}

// ---------------------------------------------------------------------------
// entry points

struct Invocation {
    std::string command;
    OptionMap options;
    bool help = false;
    std::string help_text;
};

/// key=value tokens become --key=value; everything else goes to CLI11.
/// Values from --config are overridden by explicit flags.
inline Invocation parse_arguments(const std::vector<std::string>& args)
{
    CLI::App app{"Thermodynamics of permutation-invariant ensembles", "permthermo"};
    Invocation inv;
    std::string config_path;
    std::map<std::string, std::string> flags;
    app.add_option("command", inv.command, "one of: irreps, thermo, otto, otto-scan, lindblad-verify, "
                                           "asymptotics-energy, asymptotics-entropy, irrep-terms");
    app.add_option("--config", config_path, "JSON file with option values");
    for (const auto& spec : option_specs()) {
        std::string names = std::string("--") + spec.key;
        if (names == "--beta" || names == "--betah" || names == "--betac")
            names += "," + names + "-grid"; // betah-grid=… reads the same as betah=…
        app.add_option(names, flags[spec.key], spec.help);
    }
    app.set_version_flag("--version", PERMTHERMO_VERSION);

    std::vector<std::string> conv{"permthermo"};
    for (const auto& a : args) {
        const auto eq = a.find('=');
        if (a.rfind("-", 0) != 0 && eq != std::string::npos && eq > 0)
            conv.push_back("--" + a);
        else
            conv.push_back(a);
    }
    std::vector<char*> argv;
    for (auto& s : conv)
        argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        inv.help = true;
        inv.help_text = app.help();
        return inv;
    } catch (const CLI::CallForVersion&) {
        inv.help = true;
        inv.help_text = std::string(PERMTHERMO_VERSION) + "\n";
        return inv;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    if (inv.command.empty())
        throw ConfigError("no command given");
    if (std::find(commands().begin(), commands().end(), inv.command) == commands().end())
        throw ConfigError("unknown command '" + inv.command + "'");

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in)
            throw ConfigError("cannot open config file '" + config_path + "'");
        json cfg;
        try {
            cfg = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config file: ") + e.what());
        }
        if (!cfg.is_object())
            throw ConfigError("config file must hold a JSON object");
        for (const auto& [k, v] : cfg.items()) {
            if (k == "command") {
                continue;
            }
            const bool known = std::any_of(option_specs().begin(), option_specs().end(),
                                           [&](const OptionSpec& s) { return k == s.key; });
            if (!known)
                throw ConfigError("config file: unknown option '" + k + "'");
            if (v.is_string())
                inv.options[k] = v.get<std::string>();
            else if (v.is_boolean())
                inv.options[k] = v.get<bool>() ? "true" : "false";
            else if (v.is_number_integer())
                inv.options[k] = std::to_string(v.get<long long>());
            else if (v.is_number())
                inv.options[k] = format_double(v.get<double>());
            else
                throw ConfigError("config file: option '" + k + "' must be a string, number or boolean");
        }
    }
    for (const auto& spec : option_specs())
        if (app.count(std::string("--") + spec.key) > 0)
            inv.options[spec.key] = flags[spec.key];
    return inv;
}

inline Output dispatch(const std::string& command, const Options& o)
{
    if (command == "irreps")
        return cmd_irreps(o);
    if (command == "thermo")
        return cmd_thermo(o);
    if (command == "otto")
        return cmd_otto(o);
    if (command == "otto-scan")
        return cmd_otto_scan(o);
    if (command == "lindblad-verify")
        return cmd_lindblad_verify(o);
    if (command == "asymptotics-energy")
        return cmd_asymptotics_energy(o);
    if (command == "asymptotics-entropy")
        return cmd_asymptotics_entropy(o);
    if (command == "irrep-terms")
        return cmd_irrep_terms(o);
    throw ConfigError("unknown command '" + command + "'");
}

inline void error_record(std::ostream& err, const std::string& kind, const std::string& message,
                         std::optional<double> residual = std::nullopt)
{
    json e;
    e["error"]["kind"] = kind;
    e["error"]["message"] = message;
    if (residual)
        e["error"]["residual"] = format_double(*residual);
    err << e.dump() << "\n";
}

/// Runs one invocation; returns the process exit status.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        const Invocation inv = parse_arguments(args);
        if (inv.help) {
            out << inv.help_text;
            return kExitOk;
        }
        const Options opts(inv.options);
        const std::string format = opts.str("format", inv.command == "lindblad-verify" ? "json" : "csv");
        if (format != "csv" && format != "json")
            throw ConfigError("format must be csv or json");
        Output result = dispatch(inv.command, opts);
        opts.reject_unused();

        json meta;
        meta["generator"] = std::string("permthermo ") + PERMTHERMO_VERSION;
        meta["command"] = inv.command;
        json cfg = json::object();
        for (const auto& [k, v] : inv.options)
            cfg[k] = v;
        meta["config"] = cfg;
        meta["seed"] = opts.str("seed", "1");
        for (const auto& [k, v] : result.metadata.items())
            meta[k] = v;
        result.command = inv.command;
        result.metadata = std::move(meta);

        std::string path = opts.str("output", "");
        const char* env_dir = std::getenv("PERMTHERMO_OUTPUT_DIR");
        if (path.empty() && env_dir && *env_dir)
            path = inv.command + "." + format;
        if (path.empty() || path == "-") {
            write_output(result, format, out);
        } else {
            std::filesystem::path p(path);
            if (p.is_relative() && env_dir && *env_dir)
                p = std::filesystem::path(env_dir) / p;
            if (p.has_parent_path())
                std::filesystem::create_directories(p.parent_path());
            std::ofstream f(p);
            if (!f)
                throw ConfigError("cannot write output file '" + p.string() + "'");
            write_output(result, format, f);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        error_record(err, "config", e.what());
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        error_record(err, "non-convergence", e.what(), e.residual());
        return kExitNonConvergence;
    } catch (const std::invalid_argument& e) {
        error_record(err, "config", e.what());
        return kExitConfig;
    } catch (const std::length_error& e) {
        error_record(err, "config", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        error_record(err, "internal", e.what());
        return kExitInternal;
    }
}

} // namespace permthermo::cli
