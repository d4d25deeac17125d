#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "varlc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"LC-network variational toolkit: critical currents, coercivity "
                 "classification, and canonical (Hamiltonian) cross-checks"};
    app.get_formatter()->column_width(30);

    std::string command;
    std::string config_path;
    std::string out;
    std::string format;
    std::string sweep;
    int trunc = 0;
    int steps = 0;
    double tol = 0.0;

    app.add_option("command", command, "one of: constants, classify, solve, hamiltonian, residual, sweep")
        ->required()
        ->check(CLI::IsMember(
            {"constants", "classify", "solve", "hamiltonian", "residual", "sweep"}));
    app.add_option("--config", config_path, "path to a flat JSON config")->required();
    auto* trunc_opt =
        app.add_option("--trunc", trunc, "series/witness mode truncation (overrides config)")
            ->check(CLI::PositiveNumber);
    auto* steps_opt =
        app.add_option("--steps", steps, "trajectory grid steps (overrides config)")
            ->check(CLI::PositiveNumber);
    auto* tol_opt = app.add_option("--tol", tol, "tolerance gate (overrides config)")
                        ->check(CLI::PositiveNumber);
    app.add_option("--out", out, "write the artifact to this file instead of stdout");
    app.add_option("--format", format, "artifact format (default: csv for solve/hamiltonian, json otherwise)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--sweep", sweep, "key=start:stop:count (sweep command only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return varlc::cli::kUsageError;
    }

    try {
        varlc::cli::Invocation inv;
        inv.command = command;
        inv.config = varlc::cli::load_config(config_path);
        if (trunc_opt->count() > 0) inv.config.trunc = trunc;
        if (steps_opt->count() > 0) inv.config.steps = steps;
        if (tol_opt->count() > 0) inv.config.tol = tol;
        inv.out = out;
        inv.format = format;
        inv.sweep = sweep;
        return varlc::cli::run_command(inv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        nlohmann::ordered_json diag;
        diag["error"] = e.what();
        std::cerr << diag.dump(2) << "\n";
        return varlc::cli::kUsageError;
    }
}
