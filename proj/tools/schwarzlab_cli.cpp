// Command-line front end for the minimal-surface pipeline.  A config file
// drives everything; stages can run together (default) or one at a time,
// either through --stage or through the subcommands, each reading the
// previous stage's artifacts from the output directory.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "schwarzlab/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Plateau-problem laboratory for the doubled Schwarzschild metric"};
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::string stage = "all";
    std::string mesh_path;
    bool verbose = false;

    app.add_option("--config", config_path, "experiment config file (key = value sections)")
        ->required();
    app.add_option("--out", out_dir, "override the configured output directory");
    app.add_option("--stage", stage,
                   "stage to run: contour|solve|sweep|assemble|diagnose|export|all")
        ->check(CLI::IsMember(
            {"contour", "solve", "sweep", "assemble", "diagnose", "export", "all"}));
    app.add_flag("--verbose", verbose, "per-iteration solver progress");

    CLI::App* sub_solve = app.add_subcommand("solve", "cold-solve the smallest radius");
    CLI::App* sub_sweep = app.add_subcommand("sweep", "continue the solve over the R schedule");
    CLI::App* sub_assemble =
        app.add_subcommand("assemble", "orbit and weld the closed-up surface");
    CLI::App* sub_diagnose = app.add_subcommand("diagnose", "run the enabled checks");
    sub_diagnose->add_option("--mesh", mesh_path,
                             "report on an arbitrary mesh file instead of the pipeline outputs");
    CLI::App* sub_export = app.add_subcommand("export", "re-emit the surface and write the manifest");
    app.require_subcommand(0, 1);

    CLI11_PARSE(app, argc, argv);

    schwarz::ExperimentConfig cfg;
    try {
        cfg = schwarz::load_config(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        cfg.solver.verbose = cfg.solver.verbose || verbose;
        schwarz::validate_config(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return schwarz::kExitConfig;
    }

    if (sub_solve->parsed()) stage = "solve";
    if (sub_sweep->parsed()) stage = "sweep";
    if (sub_assemble->parsed()) stage = "assemble";
    if (sub_diagnose->parsed()) stage = "diagnose";
    if (sub_export->parsed()) stage = "export";

    try {
        if (stage == "all") return schwarz::run_pipeline(cfg);
        if (stage == "contour") {
            schwarz::stage_contour(cfg);
        } else if (stage == "solve") {
            schwarz::stage_contour(cfg);  // the contour listing belongs with the solve
            schwarz::stage_solve(cfg);
        } else if (stage == "sweep") {
            schwarz::stage_sweep(cfg);
        } else if (stage == "assemble") {
            schwarz::stage_assemble(cfg);
        } else if (stage == "diagnose") {
            const schwarz::DiagnosticsReport report =
                mesh_path.empty() ? schwarz::stage_diagnose(cfg)
                                  : schwarz::diagnose_mesh(cfg, mesh_path);
            return report.all_pass() ? schwarz::kExitOk : schwarz::kExitDiagnostics;
        } else if (stage == "export") {
            schwarz::stage_export(cfg);
        }
        return schwarz::kExitOk;
    } catch (const schwarz::StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return schwarz::kExitConfig;
    }
}
