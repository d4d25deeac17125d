#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "varlc/bvp.hpp"
#include "varlc/circuit.hpp"
#include "varlc/matrix.hpp"
#include "varlc/quadratic.hpp"

namespace varlc::cli {

/// Everything a command needs, merged from the config document and flags.
struct RunConfig {
    std::string preset = "lc";      ///< "lc" or "electromech"
    CircuitParams circuit;          ///< populated when preset == "lc"
    ElectromechParams electromech;  ///< populated when preset == "electromech"
    Vec x0;                         ///< initial state for canonical solves
    int trunc = 64;                 ///< series / witness mode truncation
    int steps = 2048;               ///< trajectory grid steps
    double tol = 1e-8;              ///< tolerance gate
    std::string trajectory;         ///< input CSV path for the residual command
};

/// Parses a flat JSON object. Unknown keys, missing required keys, and
/// invalid values raise std::runtime_error naming the offending key.
/// Optional keys: preset, trunc, steps, tol, trajectory; circuit keys are
/// required for the "lc" preset, while "electromech" needs only t0/t1 and
/// reads optional q1_0/q2_0 as the initial (charge, angle) state.
RunConfig parse_config(const std::string& text);

/// Reads a file and parses it with parse_config.
RunConfig load_config(const std::string& path);

/// One fully resolved command-line invocation.
struct Invocation {
    std::string command;  ///< constants|classify|solve|hamiltonian|residual|sweep
    RunConfig config;
    std::string out;     ///< output path; empty writes to the fallback stream
    std::string format;  ///< "csv", "json", or empty for the command default
    std::string sweep;   ///< "key=start:stop:count" for the sweep command
};

/// Exit codes shared by the binary and the tests.
enum ExitCode : int {
    kOk = 0,
    kUsageError = 1,
    kToleranceExceeded = 2,
    kUnsolvableResonance = 3,
    kNoConvergence = 4,
};

/// Runs one command. The artifact goes to inv.out when set, otherwise to
/// fallback_out; diagnostics and error JSON go to err. Returns the exit code.
int run_command(const Invocation& inv, std::ostream& fallback_out, std::ostream& err);

/// Writes a critical-point trajectory as CSV with columns
/// t,q1,q2,i3,i5,i6,l3,l5,l6 (LF line endings, 17 significant digits).
void write_trajectory_csv(std::ostream& os, const CircuitParams& params,
                          const BvpSolution& sol);

/// Re-ingested trajectory file.
struct TrajectoryFile {
    Vec times;
    Vec q1;
    Vec q2;
    std::vector<Vec> currents;  ///< (i3, i5, i6) per node
    Vec mu;                     ///< (l3, l5, l6) from the first data row
};

/// Parses a CSV produced by write_trajectory_csv. Throws std::runtime_error
/// naming the line on malformed input.
TrajectoryFile read_trajectory_csv(std::istream& is);

}  // namespace varlc::cli
