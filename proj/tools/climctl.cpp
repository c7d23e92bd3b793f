// climctl: synthesize and exercise the minimum-time insolation controller
// for the two-box energy-balance climate model.
//
// Subcommands:
//   equilibrium          solve for the fixed point, print state + eigenvalues
//   synthesize           build the transition table and DOC, export CSVs
//   scenario regulator   perturbation-recovery experiment (quarter steps)
//   scenario offset      warming-offset experiment (year steps, hold phase)
//
// Exit codes: 0 success, 2 config error, 3 numerical failure / control lost,
// 4 infeasible target.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "climctl/config.hpp"
#include "climctl/io.hpp"

namespace {

using namespace climctl;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInfeasible = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    int threads = 0;
};

RunConfig resolve_config(const CommonOpts& opts, const ScenarioConfig& base) {
    RunConfig cfg = load_config(opts.config_path, base);
    for (const std::string& kv : opts.overrides) apply_override(cfg, kv);
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.threads > 0) cfg.scenario.n_threads = opts.threads;
    validate(cfg);
    return cfg;
}

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    return cfg.out_dir;
}

int cmd_equilibrium(const CommonOpts& opts) {
    const RunConfig cfg = resolve_config(opts, regulator_defaults());
    const auto out = ensure_out_dir(cfg);
    const ClimateState eq = equilibrium(cfg.scenario.params);
    const auto eig = eigenvalue_real_parts(jacobian(eq, ControlLevel{0.0}, cfg.scenario.params));
    std::cout << "equilibrium: T_A = " << format_double(eq.t_a)
              << " K, T_s = " << format_double(eq.t_s)
              << " K; Jacobian eigenvalue real parts: " << format_double(eig[0]) << ", "
              << format_double(eig[1]) << " s^-1\n";
    write_equilibrium_csv(out / "equilibrium.csv", eq, eig);
    return kExitOk;
}

int cmd_synthesize(const CommonOpts& opts) {
    const RunConfig cfg = resolve_config(opts, regulator_defaults());
    const auto out = ensure_out_dir(cfg);
    const ScenarioConfig& s = cfg.scenario;
    const CellGrid grid{s.region, s.n_a, s.n_s};
    const ControlSet controls = control_levels(s.u_max, s.segments);

    const auto t0 = std::chrono::steady_clock::now();
    const TransitionTable table =
        build_transitions(grid, controls, s.params, s.step, s.n_threads);
    const DocTable doc = solve_min_time(table, target_cells(s.target_state, grid, s.target_radius));
    const ControllableRegion region = controllable_region(doc);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_doc_csv(out / "doc.csv", doc);
    write_controllable_csv(out / "controllable.csv", region, grid);

    std::ostringstream summary;
    summary << "cells: " << grid.cell_count() << "\nlevels: " << controls.count()
            << "\nintegrations: " << grid.cell_count() * controls.count()
            << "\nblowups_sunk: " << table.blowup_count
            << "\ncontrollable: " << region.count << " of " << grid.cell_count()
            << "\nwall_clock_s: " << elapsed << "\n";
    std::cout << summary.str();
    std::ofstream(out / "summary.txt", std::ios::binary) << summary.str();
    return kExitOk;
}

int cmd_scenario(const CommonOpts& opts, bool offset) {
    const RunConfig cfg = resolve_config(opts, offset ? offset_defaults() : regulator_defaults());
    const auto out = ensure_out_dir(cfg);
    const ScenarioReport rep =
        offset ? offset_scenario(cfg.scenario) : regulator_scenario(cfg.scenario);

    write_trajectory_csv(out / "trajectory.csv", rep.controlled.trajectory);
    write_trajectory_csv(out / "uncontrolled.csv", rep.uncontrolled);
    write_doc_csv(out / "doc.csv", rep.doc);
    const std::string text = scenario_report_text(rep);
    std::ofstream(out / "report.txt", std::ios::binary) << text;
    std::cout << text;

    if (!rep.feasible) return kExitInfeasible;
    if (rep.controlled.status == LoopStatus::kControlLost) return kExitNumerical;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum-time insolation controller for a two-box climate model"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&opts](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "JSON config file");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--set", opts.overrides, "dotted key=value override (repeatable)");
        cmd->add_option("--threads", opts.threads, "worker threads for synthesis");
    };

    CLI::App* eq = app.add_subcommand("equilibrium", "solve the model fixed point");
    add_common(eq);
    CLI::App* synth = app.add_subcommand("synthesize", "build the DOC table");
    add_common(synth);
    CLI::App* scen = app.add_subcommand("scenario", "run a packaged experiment");
    std::string which;
    scen->add_option("which", which, "regulator or offset")->required();
    add_common(scen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitConfig : kExitOk;
    }

    try {
        if (eq->parsed()) return cmd_equilibrium(opts);
        if (synth->parsed()) return cmd_synthesize(opts);
        if (scen->parsed()) {
            if (which == "regulator") return cmd_scenario(opts, false);
            if (which == "offset") return cmd_scenario(opts, true);
            std::cerr << "error: unknown scenario '" << which
                      << "' (expected regulator or offset)\n";
            return kExitConfig;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const EquilibriumError& e) {
        std::cerr << "error: " << e.what() << " (last iterate " << e.last_iterate.t_a << ", "
                  << e.last_iterate.t_s << ")\n";
        return kExitNumerical;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
