#include "varlc/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "varlc/classify.hpp"
#include "varlc/eig.hpp"
#include "varlc/engine.hpp"
#include "varlc/hamiltonian.hpp"
#include "varlc/series.hpp"

namespace varlc::cli {

namespace {

using nlohmann::ordered_json;

const std::map<std::string, double CircuitParams::*>& circuit_fields() {
    static const std::map<std::string, double CircuitParams::*> fields = {
        {"L3", &CircuitParams::L3},           {"L4", &CircuitParams::L4},
        {"L5", &CircuitParams::L5},           {"L6", &CircuitParams::L6},
        {"C1", &CircuitParams::C1},           {"C2", &CircuitParams::C2},
        {"t0", &CircuitParams::t0},           {"t1", &CircuitParams::t1},
        {"q1_0", &CircuitParams::q1_0},       {"q2_0", &CircuitParams::q2_0},
        {"lambda3", &CircuitParams::lambda3}, {"lambda5", &CircuitParams::lambda5},
        {"lambda6", &CircuitParams::lambda6},
    };
    return fields;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void config_error(const std::string& message) {
    throw std::runtime_error("config: " + message);
}

double require_number(const nlohmann::json& doc, const std::string& key) {
    if (!doc.contains(key)) config_error("missing required key \"" + key + "\"");
    const auto& v = doc.at(key);
    if (!v.is_number()) config_error("key \"" + key + "\" must be a number");
    return v.get<double>();
}

std::optional<double> optional_number(const nlohmann::json& doc, const std::string& key) {
    if (!doc.contains(key)) return std::nullopt;
    const auto& v = doc.at(key);
    if (!v.is_number()) config_error("key \"" + key + "\" must be a number");
    return v.get<double>();
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::UniqueMinimum: return "UniqueMinimum";
        case Verdict::NoExtremum: return "NoExtremum";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

ordered_json classify_json(const ClassificationReport& rep) {
    ordered_json j;
    j["verdict"] = verdict_name(rep.verdict);
    j["S1_definite"] = rep.S1_definite;
    j["S2_negative_definite"] = rep.S2_negative_definite;
    j["S2_has_negative_eigenvalue"] = rep.S2_has_negative_eigenvalue;
    j["equal_capacitance_case"] = rep.equal_capacitance_case;
    j["K_C1"] = rep.K_C1;
    j["Ktilde_C2"] = rep.Ktilde_C2;
    j["S1_eigenvalues"] = rep.S1_eigenvalues;
    j["S2_eigenvalues"] = rep.S2_eigenvalues;
    j["has_witness"] = rep.witness.has_value();
    if (rep.witness) j["witness_modes"] = rep.witness->Ntrunc;
    j["witness_ray"] = rep.witness_ray;
    return j;
}

ordered_json resonance_json(const ResonanceReport& rep) {
    ordered_json j;
    j["resonant"] = rep.resonant;
    ordered_json modes = ordered_json::array();
    for (const auto& [channel, k] : rep.resonant_modes)
        modes.push_back(ordered_json{{"channel", channel}, {"multiple", k}});
    j["resonant_modes"] = modes;
    j["solvable"] = rep.solvable;
    j["family_dimension"] = rep.family_dimension;
    j["near_resonance_warning"] = rep.near_resonance_warning;
    return j;
}

void emit(std::ostream& os, const ordered_json& j, int indent = 2) {
    os << j.dump(indent) << "\n";
}

/// Resolves the output format, validating it against what a command accepts.
std::string resolve_format(const Invocation& inv, const std::string& fallback,
                           bool csv_allowed) {
    std::string format = inv.format.empty() ? fallback : inv.format;
    if (format != "csv" && format != "json")
        throw std::runtime_error("format: expected csv or json, got \"" + format + "\"");
    if (format == "csv" && !csv_allowed)
        throw std::runtime_error("format: the " + inv.command + " command emits JSON only");
    return format;
}

void require_lc(const Invocation& inv) {
    if (inv.config.preset != "lc")
        throw std::runtime_error("the " + inv.command +
                                 " command requires the \"lc\" preset");
}

// ---------------------------------------------------------------------------
// constants

int cmd_constants(const Invocation& inv, std::ostream& os) {
    require_lc(inv);
    resolve_format(inv, "json", false);
    const CircuitParams& p = inv.config.circuit;
    const auto [k1, k2] = circuit_constants(p);
    const CircuitMatrices cm = build_matrices(p);
    const StabilityMatrices sm = build_stability_matrices(p, k1.K, k2.K);
    const EigenDecomposition e1 = sym_eig(sm.S1);
    const EigenDecomposition e2 = sym_eig(sm.S2);

    ordered_json j;
    j["K_C1"] = k1.K;
    j["Ktilde_C2"] = k2.K;
    j["h1"] = cm.h1;
    j["h2"] = cm.h2;
    j["S1_eigenvalues"] = e1.values;
    j["S2_eigenvalues"] = e2.values;
    emit(os, j);
    return kOk;
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(const Invocation& inv, std::ostream& os) {
    require_lc(inv);
    resolve_format(inv, "json", false);
    const ClassificationReport rep =
        classify_critical_structure(inv.config.circuit, inv.config.trunc);
    emit(os, classify_json(rep));
    return kOk;
}

// ---------------------------------------------------------------------------
// solve

ordered_json trajectory_rows(const CircuitParams& p, const BvpSolution& sol) {
    ordered_json rows = ordered_json::array();
    const Vec& l = sol.stationarity_constants;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        const Vec& s = sol.grid.states[i];
        rows.push_back(ordered_json::array({sol.grid.times[i], p.q1_0 + s[0],
                                            p.q2_0 + s[1] + s[2], sol.currents[i][0],
                                            sol.currents[i][1], sol.currents[i][2], l[0],
                                            l[1], l[2]}));
    }
    return rows;
}

int cmd_solve(const Invocation& inv, std::ostream& os, std::ostream& err) {
    require_lc(inv);
    const std::string format = resolve_format(inv, "csv", true);
    const CircuitParams& p = inv.config.circuit;
    const int steps = inv.config.steps;

    const auto [report, family] = resonance_analysis(p, steps);
    if (report.resonant && !family) {
        ordered_json diag;
        diag["error"] = "resonant circuit: boundary equation has no solution";
        diag["resonance"] = resonance_json(report);
        emit(err, diag);
        return kUnsolvableResonance;
    }
    const BvpSolution sol = report.resonant ? family->particular : solve_critical_point(p, steps);

    // Boundary defect: the cumulative transfers must hit the prescribed
    // charges at t1.
    const Vec& xT = sol.grid.states.back();
    const double defect =
        std::max({std::abs(xT[0] - p.lambda3), std::abs(xT[1] - p.lambda5),
                  std::abs(xT[2] - p.lambda6)});
    const auto [sn_deviation, sn_means] = stationarity_residual(p, sol);

    ordered_json info;
    info["resonance"] = resonance_json(report);
    info["boundary_defect"] = defect;
    info["stationarity_constants"] = sol.stationarity_constants;
    info["stationarity_deviation"] = sn_deviation;
    info["stationarity_means"] = sn_means;
    info["tolerance"] = inv.config.tol;
    info["within_tolerance"] = defect <= inv.config.tol;

    if (format == "csv") {
        write_trajectory_csv(os, p, sol);
        emit(err, info);
    } else {
        ordered_json j = info;
        j["columns"] =
            ordered_json::array({"t", "q1", "q2", "i3", "i5", "i6", "l3", "l5", "l6"});
        j["trajectory"] = trajectory_rows(p, sol);
        emit(os, j);
    }
    return defect <= inv.config.tol ? kOk : kToleranceExceeded;
}

// ---------------------------------------------------------------------------
// hamiltonian

void write_canonical_csv(std::ostream& os, const OdeGrid& x, const CostateTrajectory& p,
                         const HamiltonianSpec& ham, const Vec& mu_h) {
    const std::size_t n = x.states.front().size();
    os << "t";
    for (std::size_t i = 1; i <= n; ++i) os << ",x" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",p" << i;
    os << ",H\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        os << fmt17(x.times[i]);
        for (std::size_t k = 0; k < n; ++k) os << ',' << fmt17(x.states[i][k]);
        for (std::size_t k = 0; k < n; ++k) os << ',' << fmt17(p.values[i][k]);
        os << ',' << fmt17(ham.value(x.states[i], p.values[i], mu_h)) << "\n";
    }
}

ordered_json canonical_rows(const OdeGrid& x, const CostateTrajectory& p,
                            const HamiltonianSpec& ham, const Vec& mu_h) {
    ordered_json rows = ordered_json::array();
    const std::size_t n = x.states.front().size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        ordered_json row = ordered_json::array();
        row.push_back(x.times[i]);
        for (std::size_t k = 0; k < n; ++k) row.push_back(x.states[i][k]);
        for (std::size_t k = 0; k < n; ++k) row.push_back(p.values[i][k]);
        row.push_back(ham.value(x.states[i], p.values[i], mu_h));
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_hamiltonian(const Invocation& inv, std::ostream& os, std::ostream& err) {
    const std::string format = resolve_format(inv, "csv", true);
    const RunConfig& cfg = inv.config;
    const auto steps = static_cast<std::size_t>(cfg.steps);

    QuadraticLagrangianSystem lagrangian;
    CostateRegime regime = CostateRegime::Unconstrained;
    if (cfg.preset == "lc") {
        lagrangian = lc_system(cfg.circuit);
        regime = CostateRegime::General;
    } else {
        lagrangian = electromech_system(cfg.electromech);
    }
    const ControlSystem sys = to_control_system(lagrangian);

    ordered_json info;
    info["preset"] = cfg.preset;
    info["regime"] = regime == CostateRegime::General ? "General" : "Unconstrained";

    Vec mu;
    OdeGrid x;
    CostateTrajectory p;
    HamiltonianSpec ham;
    try {
        if (regime == CostateRegime::General) {
            ham = legendre_transform(lagrangian, Vec(lagrangian.l(), 0.0));
            ConstrainedCanonicalSolution csol = solve_constrained_canonical(
                lagrangian, cfg.x0, steps, CostateRegime::General, nullptr, cfg.tol);
            mu = std::move(csol.mu);
            x = std::move(csol.canonical.x);
            p = std::move(csol.canonical.p);
            info["mu"] = mu;
            info["outer_iterations"] = csol.outer_iterations;
            info["constraint_residual"] = csol.constraint_residual;
            info["shooting_iterations"] = csol.canonical.iterations;
            info["terminal_defect"] = csol.canonical.terminal_defect;
        } else {
            ham = legendre_transform(lagrangian);
            CanonicalSolution sol = integrate_canonical(ham, cfg.x0, Vec(cfg.x0.size(), 0.0),
                                                        Vec{}, steps, cfg.tol);
            x = std::move(sol.x);
            p = std::move(sol.p);
            info["shooting_iterations"] = sol.iterations;
            info["terminal_defect"] = sol.terminal_defect;
        }
    } catch (const std::runtime_error& e) {
        ordered_json diag;
        diag["error"] = e.what();
        emit(err, diag);
        return kNoConvergence;
    }

    const EquivalenceReport rep = verify_equivalence(sys, ham, x, p, mu, regime);
    const Vec mu_h = regime == CostateRegime::General ? mu : Vec{};
    const double drift = energy_drift(ham, x, p, mu_h);
    const double h0 = ham.value(x.states.front(), p.values.front(), mu_h);

    ordered_json equivalence;
    equivalence["direction"] = "HamiltonianToLagrangian";
    equivalence["canonical_residual"] = rep.canonical_residual;
    equivalence["euler_lagrange_residual"] = rep.euler_lagrange_residual;
    equivalence["terminal_costate_error"] = rep.terminal_costate_error;
    info["equivalence"] = equivalence;
    info["energy_drift"] = drift;
    info["initial_energy"] = h0;

    if (format == "csv") {
        write_canonical_csv(os, x, p, ham, mu_h);
        emit(err, info);
    } else {
        ordered_json j = info;
        ordered_json columns = ordered_json::array();
        columns.push_back("t");
        const std::size_t n = x.states.front().size();
        for (std::size_t i = 1; i <= n; ++i) columns.push_back("x" + std::to_string(i));
        for (std::size_t i = 1; i <= n; ++i) columns.push_back("p" + std::to_string(i));
        columns.push_back("H");
        j["columns"] = columns;
        j["trajectory"] = canonical_rows(x, p, ham, mu_h);
        emit(os, j);
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// residual

int cmd_residual(const Invocation& inv, std::ostream& os) {
    require_lc(inv);
    resolve_format(inv, "json", false);
    const RunConfig& cfg = inv.config;
    if (cfg.trajectory.empty())
        throw std::runtime_error("residual: config key \"trajectory\" (CSV path) is required");
    std::ifstream file(cfg.trajectory, std::ios::binary);
    if (!file)
        throw std::runtime_error("residual: cannot open trajectory file \"" + cfg.trajectory +
                                 "\"");
    const TrajectoryFile tf = read_trajectory_csv(file);

    const ControlSystem sys = to_control_system(lc_system(cfg.circuit));
    ControlTrajectory u;
    u.times = tf.times;
    u.values = tf.currents;
    const Vec x0{cfg.circuit.q1_0, cfg.circuit.q2_0};

    double el = 0.0;
    for (const Vec& r : el_residual(sys, u, x0, tf.mu)) el = std::max(el, norm_inf(r));
    const double cr = norm_inf(constraint_residual(sys, u, x0));
    const bool ok = el <= cfg.tol && cr <= cfg.tol;

    ordered_json j;
    j["euler_lagrange_residual"] = el;
    j["constraint_residual"] = cr;
    j["mu"] = tf.mu;
    j["nodes"] = tf.times.size();
    j["tolerance"] = cfg.tol;
    j["within_tolerance"] = ok;
    emit(os, j);
    return ok ? kOk : kToleranceExceeded;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepSpec {
    std::string key;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
};

double parse_full_double(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("sweep: invalid " + what + " \"" + text + "\"");
    }
    if (pos != text.size())
        throw std::runtime_error("sweep: invalid " + what + " \"" + text + "\"");
    return v;
}

SweepSpec parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw std::runtime_error("sweep: expected key=start:stop:count, got \"" + text + "\"");
    SweepSpec spec;
    spec.key = text.substr(0, eq);
    if (circuit_fields().find(spec.key) == circuit_fields().end())
        throw std::runtime_error("sweep: unknown circuit key \"" + spec.key + "\"");
    const std::string rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::runtime_error("sweep: expected key=start:stop:count, got \"" + text + "\"");
    spec.start = parse_full_double(rest.substr(0, c1), "start");
    spec.stop = parse_full_double(rest.substr(c1 + 1, c2 - c1 - 1), "stop");
    const std::string count_text = rest.substr(c2 + 1);
    const double count_v = parse_full_double(count_text, "count");
    spec.count = static_cast<int>(count_v);
    if (spec.count < 1 || static_cast<double>(spec.count) != count_v)
        throw std::runtime_error("sweep: count must be a positive integer");
    return spec;
}

int cmd_sweep(const Invocation& inv, std::ostream& os) {
    require_lc(inv);
    resolve_format(inv, "json", false);
    if (inv.sweep.empty())
        throw std::runtime_error("sweep: --sweep key=start:stop:count is required");
    const SweepSpec spec = parse_sweep(inv.sweep);
    const auto field = circuit_fields().at(spec.key);
    const int trunc = inv.config.trunc;

    std::vector<double> values(spec.count);
    for (int i = 0; i < spec.count; ++i)
        values[i] = spec.count == 1
                        ? spec.start
                        : spec.start + (spec.stop - spec.start) * i / (spec.count - 1);

    auto run_point = [&](double v) -> ordered_json {
        CircuitParams p = inv.config.circuit;
        p.*field = v;
        ordered_json j;
        j["key"] = spec.key;
        j["value"] = v;
        try {
            const ClassificationReport rep = classify_critical_structure(p, trunc);
            const ordered_json fields = classify_json(rep);
            for (const auto& [k, item] : fields.items()) j[k] = item;
        } catch (const std::exception& e) {
            j["error"] = e.what();
        }
        return j;
    };

    // Parallel map in bounded batches, emission in sweep order.
    constexpr int kBatch = 16;
    bool any_error = false;
    for (int base = 0; base < spec.count; base += kBatch) {
        const int end = std::min(spec.count, base + kBatch);
        std::vector<std::future<ordered_json>> batch;
        batch.reserve(static_cast<std::size_t>(end - base));
        for (int i = base; i < end; ++i)
            batch.push_back(std::async(std::launch::async, run_point, values[i]));
        for (auto& fut : batch) {
            const ordered_json j = fut.get();
            if (j.contains("error")) any_error = true;
            os << j.dump() << "\n";
        }
    }
    return any_error ? kUsageError : kOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// config

RunConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) config_error("top level must be a flat JSON object");

    RunConfig cfg;
    if (doc.contains("preset")) {
        if (!doc.at("preset").is_string()) config_error("key \"preset\" must be a string");
        cfg.preset = doc.at("preset").get<std::string>();
        if (cfg.preset != "lc" && cfg.preset != "electromech")
            config_error("unknown preset \"" + cfg.preset + "\" (expected lc or electromech)");
    }

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const bool known = key == "preset" || key == "trajectory" || key == "trunc" ||
                           key == "steps" || key == "tol" ||
                           circuit_fields().find(key) != circuit_fields().end();
        if (!known) config_error("unknown key \"" + key + "\"");
        if (!it->is_primitive() || it->is_null())
            config_error("key \"" + key + "\" must be a scalar");
    }

    if (cfg.preset == "lc") {
        for (const auto& [key, member] : circuit_fields())
            cfg.circuit.*member = require_number(doc, key);
        try {
            cfg.circuit.validate();
        } catch (const std::exception& e) {
            config_error(e.what());
        }
        cfg.x0 = Vec{cfg.circuit.q1_0, cfg.circuit.q2_0};
    } else {
        cfg.electromech.t0 = require_number(doc, "t0");
        cfg.electromech.t1 = require_number(doc, "t1");
        if (!(cfg.electromech.t1 > cfg.electromech.t0))
            config_error("key \"t1\" must exceed \"t0\"");
        const double q0 = optional_number(doc, "q1_0").value_or(0.0);
        const double theta0 = optional_number(doc, "q2_0").value_or(0.0);
        cfg.x0 = Vec{q0, theta0};
    }

    if (const auto v = optional_number(doc, "trunc")) {
        cfg.trunc = static_cast<int>(*v);
        if (cfg.trunc < 1 || static_cast<double>(cfg.trunc) != *v)
            config_error("key \"trunc\" must be a positive integer");
    }
    if (const auto v = optional_number(doc, "steps")) {
        cfg.steps = static_cast<int>(*v);
        if (cfg.steps < 1 || static_cast<double>(cfg.steps) != *v)
            config_error("key \"steps\" must be a positive integer");
    }
    if (const auto v = optional_number(doc, "tol")) {
        cfg.tol = *v;
        if (!(cfg.tol > 0.0)) config_error("key \"tol\" must be positive");
    }
    if (doc.contains("trajectory")) {
        if (!doc.at("trajectory").is_string())
            config_error("key \"trajectory\" must be a string");
        cfg.trajectory = doc.at("trajectory").get<std::string>();
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("config: cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

// ---------------------------------------------------------------------------
// trajectory CSV

void write_trajectory_csv(std::ostream& os, const CircuitParams& params,
                          const BvpSolution& sol) {
    os << "t,q1,q2,i3,i5,i6,l3,l5,l6\n";
    const Vec& l = sol.stationarity_constants;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        const Vec& s = sol.grid.states[i];
        os << fmt17(sol.grid.times[i]) << ',' << fmt17(params.q1_0 + s[0]) << ','
           << fmt17(params.q2_0 + s[1] + s[2]) << ',' << fmt17(sol.currents[i][0]) << ','
           << fmt17(sol.currents[i][1]) << ',' << fmt17(sol.currents[i][2]) << ','
           << fmt17(l[0]) << ',' << fmt17(l[1]) << ',' << fmt17(l[2]) << "\n";
    }
}

TrajectoryFile read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("trajectory: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,q1,q2,i3,i5,i6,l3,l5,l6")
        throw std::runtime_error("trajectory: unexpected header \"" + line + "\"");

    TrajectoryFile tf;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 9> row{};
        std::size_t field = 0;
        std::size_t pos = 0;
        while (field < 9) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell = line.substr(pos, comma == std::string::npos
                                                          ? std::string::npos
                                                          : comma - pos);
            try {
                std::size_t used = 0;
                row[field] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("trajectory: bad number \"" + cell + "\" on line " +
                                         std::to_string(line_no));
            }
            ++field;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (field != 9)
            throw std::runtime_error("trajectory: expected 9 fields on line " +
                                     std::to_string(line_no));
        tf.times.push_back(row[0]);
        tf.q1.push_back(row[1]);
        tf.q2.push_back(row[2]);
        tf.currents.push_back(Vec{row[3], row[4], row[5]});
        if (tf.mu.empty()) tf.mu = Vec{row[6], row[7], row[8]};
    }
    if (tf.times.size() < 2)
        throw std::runtime_error("trajectory: need at least two data rows");
    for (std::size_t i = 1; i < tf.times.size(); ++i)
        if (!(tf.times[i] > tf.times[i - 1]))
            throw std::runtime_error("trajectory: times must be strictly increasing");
    return tf;
}

// ---------------------------------------------------------------------------
// dispatch

int run_command(const Invocation& inv, std::ostream& fallback_out, std::ostream& err) {
    std::ofstream file;
    std::ostream* os = &fallback_out;
    if (!inv.out.empty()) {
        file.open(inv.out, std::ios::binary);
        if (!file) {
            ordered_json diag;
            diag["error"] = "cannot open output file \"" + inv.out + "\"";
            emit(err, diag);
            return kUsageError;
        }
        os = &file;
    }

    try {
        if (inv.command == "constants") return cmd_constants(inv, *os);
        if (inv.command == "classify") return cmd_classify(inv, *os);
        if (inv.command == "solve") return cmd_solve(inv, *os, err);
        if (inv.command == "hamiltonian") return cmd_hamiltonian(inv, *os, err);
        if (inv.command == "residual") return cmd_residual(inv, *os);
        if (inv.command == "sweep") return cmd_sweep(inv, *os);
        throw std::runtime_error("unknown command \"" + inv.command +
                                 "\" (expected constants|classify|solve|hamiltonian|residual|sweep)");
    } catch (const std::exception& e) {
        ordered_json diag;
        diag["error"] = e.what();
        emit(err, diag);
        return kUsageError;
    }
}

}  // namespace varlc::cli
