#pragma once

// Configuration-driven experiment pipeline: contour -> solve -> sweep ->
// assemble -> diagnose -> export.  Every stage persists its outputs under
// one directory and reads its inputs back from there, so stages can be
// rerun independently; the export stage writes a manifest of content
// hashes that makes reproducibility checkable byte for byte.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "schwarzlab/diagnostics.hpp"
#include "schwarzlab/plateau.hpp"

namespace schwarz {

// Process exit codes shared by the stages and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;  // bad config or missing input artifact
inline constexpr int kExitSolver = 3;
inline constexpr int kExitWelding = 4;
inline constexpr int kExitDiagnostics = 5;

// Which checks the diagnose stage runs, and their thresholds.  The
// asymptotic checks (growth, total_curvature, end_decay) measure the
// near-Euclidean end regime and only discriminate at small m, so they
// default off; enable them for small-m runs.
struct DiagnosticsSettings {
    bool residual = false;  // pointwise |H_g| estimate; discretization-limited
    double residual_threshold = 1e-2;
    bool containment = true;
    double containment_threshold = 1e-8;
    bool monotonicity = true;
    // Relative half-width (in units of the horizon radius) of the contact band
    // around the totally geodesic obstacle faces.  Crossings and curvature
    // samples inside the band are discarded: surfaces resting on the same face
    // separate by less than the mesh resolves.
    double contact_band = 0.01;
    bool slices = true;
    std::vector<double> slice_phis{0.39269908169872414,  // pi/8
                                   0.52359877559829882,  // pi/6
                                   0.78539816339744828};  // pi/4
    bool area_bound = true;
    double area_bound_phi = 0.52359877559829882;  // pi/6
    double area_bound_eps = 0.2;
    double area_bound_delta = 2.0;
    bool curvature_ratio = true;
    double curvature_ratio_threshold = 2.0;
    bool stability = true;
    int stability_bumps = 5;
    double stability_threshold = -1e-3;
    bool blowup = true;
    double blowup_slack = 1.3;
    double blowup_a_tolerance = 0.1;
    bool growth = false;
    std::vector<double> growth_radii;  // empty: geometric ladder up to max R
    double growth_band = 0.2;          // pass iff |exponent - 2| <= band
    bool total_curvature = false;      // |K| drift between last two truncations
    double total_curvature_threshold = 0.05;
    bool end_decay = false;  // sup|z| per annulus non-increasing outer half
};

struct ExperimentConfig {
    double m = 2.0;
    // Exactly one of tau (>= 1) or theta (in (0, pi/2]) must be set; theta
    // not of the form pi/N needs allow_any_theta and disables assembly.
    int tau = 0;
    double theta = 0.0;
    bool allow_any_theta = false;
    std::vector<double> radii{3.0, 5.0, 8.0};
    int refinement_level = 2;
    int n_per_arc = 16;
    // Recorded in the manifest for provenance; the standard pipeline is
    // fully deterministic and does not consume it.
    unsigned long seed = 0;
    std::filesystem::path output_dir = "runs/experiment";
    SolverConfig solver;
    DiagnosticsSettings diagnostics;

    double effective_theta() const;  // pi/(tau+1) when tau is set
    bool assembly_enabled() const;   // theta = pi/N (always true via tau)
    int effective_tau() const;       // N - 1, or 0 when assembly is disabled
};

// Sectioned key = value file; see the README for the key reference.
// Throws std::runtime_error with "file:line: message" on malformed input,
// unknown keys, or invariant violations.
ExperimentConfig load_config(const std::filesystem::path& path);
void validate_config(const ExperimentConfig& cfg);  // throws std::runtime_error

// Normalized listing of every setting (the form echoed into the manifest).
std::string config_echo(const ExperimentConfig& cfg);

// Stage failure carrying the process exit code.
struct StageError : std::runtime_error {
    int exit_code;
    StageError(int code, const std::string& message)
        : std::runtime_error(message), exit_code(code) {}
};

// Artifact layout under the output directory.
struct ArtifactPaths {
    std::filesystem::path dir;
    explicit ArtifactPaths(std::filesystem::path d) : dir(std::move(d)) {}
    std::filesystem::path contour_csv() const { return dir / "contour.csv"; }
    std::filesystem::path mesh_obj(int k) const;       // solved mesh, schedule index k
    std::filesystem::path mesh_bnd(int k) const;
    std::filesystem::path mesh_arcs_csv(int k) const;  // boundary arc parameters
    std::filesystem::path solve_csv(int k) const;      // solver report
    std::filesystem::path hausdorff_csv() const { return dir / "hausdorff.csv"; }
    std::filesystem::path copy_obj(int element) const;  // one orbit copy per element
    std::filesystem::path welded_obj() const { return dir / "welded.obj"; }
    std::filesystem::path welded_bnd() const { return dir / "welded.bnd"; }
    std::filesystem::path provenance_csv() const { return dir / "provenance.csv"; }
    std::filesystem::path assembly_txt() const { return dir / "assembly.txt"; }
    std::filesystem::path diagnostics_csv() const { return dir / "diagnostics.csv"; }
    std::filesystem::path surface_obj() const { return dir / "surface.obj"; }
    std::filesystem::path manifest_txt() const { return dir / "manifest.txt"; }
};

// Stages.  Each throws StageError; missing input artifacts map to
// kExitConfig with the missing path named.
void stage_contour(const ExperimentConfig& cfg);
void stage_solve(const ExperimentConfig& cfg);   // first radius, cold start
void stage_sweep(const ExperimentConfig& cfg);   // remaining radii, warm-started
void stage_assemble(const ExperimentConfig& cfg);
DiagnosticsReport stage_diagnose(const ExperimentConfig& cfg);
void stage_export(const ExperimentConfig& cfg);  // surface re-emit + manifest

// Residual/area/total-curvature report for an arbitrary mesh file.
DiagnosticsReport diagnose_mesh(const ExperimentConfig& cfg,
                                const std::filesystem::path& mesh_path);

// All stages in order; returns a process exit code instead of throwing.
int run_pipeline(const ExperimentConfig& cfg);

std::string sha256_file_hex(const std::filesystem::path& path);

// Config echo plus one "path  sha256" line per artifact, paths sorted.
void write_manifest(const ExperimentConfig& cfg);

}  // namespace schwarz
