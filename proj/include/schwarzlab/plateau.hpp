#pragma once

// Discrete Plateau problem: minimize conformal area over interior vertex
// positions with the boundary pinned to the contour.  Descent direction is
// the H^1 (Sobolev) gradient: the Euclidean area gradient is pushed through
// the inverse of the s^4-weighted cotangent stiffness of the current mesh
// (Dirichlet rows on the boundary), which makes the step scale
// mesh-resolution independent; plain pointwise descent needs steps ~h^2 and
// oscillates.  Armijo backtracking guarantees every accepted step decreases
// area.  When the predicted decrease drops below the floating-point noise
// floor of the total area for a sustained run, the solver stops with
// stop_reason "noise_floor": no representable progress remains.
//
// For meshes over the standard contour (wedge_constrained) the minimizer
// provably stays inside the closed wedge-above-plane-outside-horizon
// region, so the solver projects trial positions into it (obstacle
// formulation).  Where the surface presses that obstacle -- it hugs the
// horizon sphere below mesh resolution near the poles -- the inscribed-area
// parametrization degenerates instead of converging; such vertices are
// pinned (an active set, reported as frozen_vertices) and descent continues
// on the rest, ending with an honestly reported residual over the movable
// set rather than a converged claim.

#include <filesystem>
#include <string>
#include <vector>

#include "schwarzlab/disk_mesh.hpp"
#include "schwarzlab/quadrature.hpp"

namespace schwarz {

struct SolverConfig {
    int max_iterations = 2000;
    // Stationarity target: the g-gradient sup-norm, sup over interior
    // vertices of |grad_v| / s(x_v)^2 (raising the area differential with
    // g^-1 = s^-4 delta and measuring in g gives |grad|_g = |grad|_euc/s^2).
    // The mass-normalized per-vertex mean-curvature residual lives in the
    // diagnostics module.
    double grad_tolerance = 1e-3;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    double initial_step = 1.0;  // fraction of the H^1 direction
    double max_step = 1.0;
    int refine_rounds = 0;       // mid-solve 1->4 subdivisions
    QuadratureRule rule = QuadratureRule::EdgeMidpoints3;
    bool check_embedded = true;
    int history_stride = 1;      // record every k-th iteration
    // Inscribed-polyhedron area minimization leaves the tangential vertex
    // distribution undetermined wherever the surface is (nearly) ruled by
    // the obstacle: vertices slide along the contact set at no area cost
    // and the triangles spanning the adjacent smooth region stretch.  Every
    // condition_stride accepted steps the solver therefore runs one vertex
    // averaging pass: each movable vertex moves toward its 1-ring centroid,
    // projected onto its tangent plane so the geometric surface is kept to
    // first order, and the whole pass is line-searched and only committed
    // if the area does not increase, so the area history stays monotone and
    // the minimization target is untouched.  0 disables conditioning.
    int condition_stride = 25;
    bool verbose = false;
};

struct SolveReport {
    bool converged = false;
    // "converged" | "noise_floor" | "embeddedness_guard" | "max_iterations"
    // | "warm_start_input".  Convergence and the reported residual are
    // measured over the movable (unfrozen) interior.  embeddedness_guard:
    // descent tried to fold the mesh through itself, the state was rolled
    // back to the last verified-embedded iterate, and no further vertex
    // could be pinned to prevent a recurrence.
    std::string stop_reason;
    int iterations = 0;
    double final_area = 0.0;
    double final_residual = 0.0;
    // Vertices pinned by the active set: either they pressed the obstacle
    // during a failed line search or they belonged to triangles caught by
    // the embeddedness guard.  Zero away from totally geodesic contact.
    int frozen_vertices = 0;
    // Conformal area per recorded iteration, advanced by the accepted
    // line-search decrease: non-increasing between refinement marks (each
    // accepted step has delta <= 0).  Refinement re-pins the boundary onto
    // the contour and may add area; refine_iterations marks those seams.
    std::vector<double> area_history;
    std::vector<double> residual_history;  // stationarity measure
    std::vector<int> refine_iterations;    // iterations at which 1->4 ran
    bool embedded = true;
    std::vector<std::pair<int, int>> intersecting_triangles;
};

// Minimizes in place.  Throws std::runtime_error (with the iteration index)
// if the line search finds no acceptable step while the Armijo model still
// predicts decrease above the noise floor, or if the H^1 stiffness cannot
// be factorized (fully collapsed triangulation).
SolveReport solve_plateau(DiskMesh& dm, const SolverConfig& cfg);

void export_solve_report_csv(const SolveReport& report, const std::filesystem::path& path);

struct SweepResult {
    std::vector<double> radii;
    std::vector<DiskMesh> meshes;
    std::vector<SolveReport> reports;
    // Hausdorff distance between consecutive solutions restricted to the
    // fixed compact wedge {m/2 <= |x| <= radii.front()}; size radii-1.
    std::vector<double> hausdorff;
};

// Solves the contour family over increasing radii, warm-starting each run
// from the previous solution extended by an exactly matching flat annular
// sector in the equatorial plane (the previous outer-circle vertices are
// reused verbatim, so the glue needs no welding tolerance).
// cfg.refine_rounds applies to the first solve only; warm-started runs
// continue on the refined connectivity.
SweepResult sweep_R(double theta, double m, const std::vector<double>& radii, int n_per_arc,
                    int refinement_level, const SolverConfig& cfg);

// Resumes a sweep from an already-solved first mesh (radii.front() must
// equal start.R); reports[0] is a "warm_start_input" placeholder since the
// start mesh is taken as given.  Lets a persisted solution seed the
// remaining radii without repeating the cold start.
SweepResult continue_sweep(DiskMesh start, const std::vector<double>& radii,
                           const SolverConfig& cfg);

}  // namespace schwarz
