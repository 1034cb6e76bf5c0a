#include "schwarzlab/plateau.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "schwarzlab/curvature.hpp"
#include "schwarzlab/metric.hpp"
#include "schwarzlab/spatial.hpp"

namespace schwarz {

namespace {

void check_solver_config(const SolverConfig& cfg) {
    if (cfg.max_iterations < 1) throw std::invalid_argument("solve_plateau: max_iterations < 1");
    if (!(cfg.grad_tolerance > 0.0))
        throw std::invalid_argument("solve_plateau: grad_tolerance <= 0");
    if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0))
        throw std::invalid_argument("solve_plateau: armijo_c outside (0,1)");
    if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0))
        throw std::invalid_argument("solve_plateau: backtrack outside (0,1)");
    if (!(cfg.initial_step > 0.0)) throw std::invalid_argument("solve_plateau: initial_step <= 0");
    if (!(cfg.max_step >= cfg.initial_step))
        throw std::invalid_argument("solve_plateau: max_step < initial_step");
    if (cfg.refine_rounds < 0) throw std::invalid_argument("solve_plateau: negative refine_rounds");
    if (cfg.history_stride < 1) throw std::invalid_argument("solve_plateau: history_stride < 1");
    if (cfg.condition_stride < 0)
        throw std::invalid_argument("solve_plateau: negative condition_stride");
}

// g-gradient sup-norm: |grad|_g = |grad|_euc / s^2 at each movable vertex.
// Frozen vertices are pinned (see the active-set logic in solve_plateau),
// so stationarity is measured over the set the solver is allowed to move.
double g_gradient_sup(double m, const TriMesh& mesh, const std::vector<Vec3>& grad,
                      const std::vector<char>& frozen) {
    double sup = 0.0;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.is_boundary[v] || frozen[v]) continue;
        sup = std::max(sup, norm(grad[v]) / conformal_scale(m, mesh.positions[v]));
    }
    return sup;
}

// Projects a point into the closed region bounded by the two vertical
// half-planes at azimuth 0 and theta, the equatorial plane z = 0, and the
// horizon sphere |x| = rh.  The minimizer lies in that region (reflecting
// an excursion across any face would lower area, and a totally geodesic
// face cannot be touched by an interior point of a minimal surface), so
// descent treats it as an obstacle.  The plane projections are applied
// twice because near the z-axis fixing one azimuth face can re-expose the
// other; the radial push-out preserves azimuth and the sign of z, so it
// cannot undo a plane projection.
Vec3 clamp_to_wedge(Vec3 p, double theta, double rh) {
    if (p.z < 0.0) p.z = 0.0;
    const double st = std::sin(theta), ct = std::cos(theta);
    for (int pass = 0; pass < 2; ++pass) {
        if (p.y < 0.0) p.y = 0.0;  // azimuth-0 face, inward normal +y
        const double d = p.x * st - p.y * ct;  // signed dist inside azimuth-theta face
        if (d < 0.0) {
            p.x -= d * st;
            p.y += d * ct;
        }
    }
    const double r = norm(p);
    if (r < rh) p = (r > 1e-300) ? p * (rh / r) : Vec3{0.0, 0.0, rh};
    return p;
}

// H^1 preconditioner: interior-vertex cotangent stiffness of the current
// mesh weighted by s^4 at triangle centroids.  Per-triangle cotan blocks
// are positive semidefinite for any shape, so with the Dirichlet boundary
// eliminated the system is SPD and an LDLT factorization exists whenever
// the triangulation has not fully collapsed.
class H1Solver {
  public:
    // Frozen vertices join the boundary as Dirichlet rows: the computed
    // direction is identically zero there.
    H1Solver(double m, const TriMesh& mesh, const std::vector<char>& frozen)
        : nv_(mesh.vertex_count()), index_(nv_, -1) {
        for (int v = 0; v < nv_; ++v)
            if (!mesh.is_boundary[v] && !frozen[v]) index_[v] = interior_++;
        m_ = m;
        triplets_.reserve(static_cast<size_t>(mesh.triangle_count()) * 9);
    }

    int movable() const { return interior_; }

    // Solves K dir = -grad on interior vertices; returns the directional
    // slope -grad.dir = grad^T K^-1 grad >= 0.
    double direction(const TriMesh& mesh, const std::vector<Vec3>& grad,
                     std::vector<Vec3>& dir) {
        triplets_.clear();
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tri = mesh.triangles[t];
            const Vec3 p0 = mesh.positions[tri[0]];
            const Vec3 p1 = mesh.positions[tri[1]];
            const Vec3 p2 = mesh.positions[tri[2]];
            const double doubled = norm(cross(p1 - p0, p2 - p0));
            if (!(doubled > 1e-300)) continue;  // zero-area: no stiffness
            const double w = conformal_factor(m_, (p0 + p1 + p2) * (1.0 / 3.0));
            const Vec3 p[3] = {p0, p1, p2};
            for (int k = 0; k < 3; ++k) {
                const int i = index_[tri[(k + 1) % 3]];
                const int j = index_[tri[(k + 2) % 3]];
                // cot(angle at k) = (e1 . e2) / |e1 x e2|
                const double wij = 0.5 * w *
                                   dot(p[(k + 1) % 3] - p[k], p[(k + 2) % 3] - p[k]) / doubled;
                if (i >= 0) triplets_.emplace_back(i, i, wij);
                if (j >= 0) triplets_.emplace_back(j, j, wij);
                if (i >= 0 && j >= 0) {
                    triplets_.emplace_back(i, j, -wij);
                    triplets_.emplace_back(j, i, -wij);
                }
            }
        }
        Eigen::SparseMatrix<double> K(interior_, interior_);
        K.setFromTriplets(triplets_.begin(), triplets_.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(K);
        if (factor.info() != Eigen::Success)
            throw std::runtime_error("solve_plateau: H^1 stiffness factorization failed");
        Eigen::MatrixXd rhs(interior_, 3);
        for (int v = 0; v < nv_; ++v) {
            const int i = index_[v];
            if (i < 0) continue;
            rhs(i, 0) = -grad[v].x;
            rhs(i, 1) = -grad[v].y;
            rhs(i, 2) = -grad[v].z;
        }
        const Eigen::MatrixXd d = factor.solve(rhs);
        dir.assign(nv_, Vec3{0.0, 0.0, 0.0});
        double slope = 0.0;
        for (int v = 0; v < nv_; ++v) {
            const int i = index_[v];
            if (i < 0) continue;
            dir[v] = Vec3{d(i, 0), d(i, 1), d(i, 2)};
            slope -= dot(grad[v], dir[v]);
        }
        return slope;
    }

  private:
    int nv_ = 0;
    int interior_ = 0;
    double m_ = 0.0;
    std::vector<int> index_;
    std::vector<Eigen::Triplet<double>> triplets_;
};

bool any_triangle_degenerate(const TriMesh& mesh) {
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        if (triangle_degenerate(mesh.positions[tri[0]], mesh.positions[tri[1]],
                                mesh.positions[tri[2]]))
            bad = true;
    }
    return bad;
}

}  // namespace

SolveReport solve_plateau(DiskMesh& dm, const SolverConfig& cfg) {
    check_solver_config(cfg);
    if (!(dm.m > 0.0)) throw std::invalid_argument("solve_plateau: mesh carries no mass");
    validate(dm.mesh);

    SolveReport rep;
    const double m = dm.m;
    const double rh = horizon_radius(m);
    const int stages = cfg.refine_rounds + 1;
    const int budget = std::max(1, cfg.max_iterations / stages);
    int total_iter = 0;
    bool converged = false;
    std::string stop;

    std::vector<double> areas, trial_areas;
    std::vector<Vec3> dir;
    std::vector<char> frozen, pressed;
    double history_area = 0.0;

    for (int stage = 0; stage < stages; ++stage) {
        const double stage_tol = cfg.grad_tolerance * std::pow(10.0, stages - 1 - stage);
        if (stage > 0) {
            dm = refine_disk_mesh(dm);
            rep.refine_iterations.push_back(total_iter);
        }
        TriMesh& mesh = dm.mesh;
        // Subdivision keeps original vertex ids, so active-set marks from a
        // coarser stage persist; midpoints start movable.
        frozen.resize(mesh.vertex_count(), 0);
        pressed.assign(mesh.vertex_count(), 0);

        // Feasibility restore before measuring anything: edge midpoints of
        // on-sphere points land inside the ball, and a warm start inherits
        // whatever sub-resolution contact the previous solve ended with.
        if (dm.wedge_constrained)
            for (int v = 0; v < mesh.vertex_count(); ++v)
                if (!mesh.is_boundary[v])
                    mesh.positions[v] = clamp_to_wedge(mesh.positions[v], dm.theta, rh);

        H1Solver h1(m, mesh, frozen);
        TriMesh trial = mesh;  // boundary positions stay valid across trials
        triangle_areas_g(m, mesh, cfg.rule, areas);
        const std::vector<std::vector<int>> ring = vertex_neighbors(mesh);
        std::vector<std::vector<int>> star(mesh.vertex_count());
        for (int t = 0; t < mesh.triangle_count(); ++t)
            for (int corner : mesh.triangles[t]) star[corner].push_back(t);

        // Running area, advanced by the accepted line-search delta so the
        // recorded history is non-increasing exactly (re-summation could
        // drift by rounding).  Refinement re-pins the boundary onto the
        // contour and may add area; refine_iterations marks those seams.
        history_area = 0.0;
        for (double a : areas) history_area += a;

        double step = cfg.initial_step / 1.25;  // first regrowth restores it
        int floor_streak = 0;
        int since_condition = 0;
        converged = false;
        stop.clear();

        // Rollback point for the embeddedness guard below: the last state
        // verified free of self-intersections.
        constexpr int kEmbedCheckInterval = 10;
        constexpr int kMaxFreezeEvents = 200;
        int freeze_events = 0;
        std::vector<Vec3> safe_positions = mesh.positions;
        std::vector<double> safe_areas = areas;
        double safe_history = history_area;
        int safe_iter = total_iter;
        size_t safe_records = rep.area_history.size();
        int since_check = 0;

        // Fifty accepted steps that together move the area by less than one
        // part in 1e9 mean the movable set has flattened out; stop instead
        // of burning the budget on representable-but-meaningless decrease.
        double window_area = history_area;
        int window_count = 0;

        const auto freeze_vertex = [&](int v) -> bool {
            if (v < 0 || mesh.is_boundary[v] || frozen[v]) return false;
            frozen[v] = 1;
            return true;
        };

        // Vertex averaging pass (see SolverConfig::condition_stride).
        // Gauss-Seidel over movable vertices: pull each toward its 1-ring
        // centroid within its tangent plane, backtrack the pull until the
        // vertex star does not gain area, and commit per vertex.  The
        // tangential projection keeps the geometric surface to first
        // order; the per-star area gate keeps the history monotone.
        std::vector<double> cond_star_areas;
        const auto condition_pass = [&]() -> int {
            const std::vector<Vec3> nrm = vertex_normals(mesh);
            int moved = 0;
            for (int v = 0; v < mesh.vertex_count(); ++v) {
                if (mesh.is_boundary[v] || frozen[v] || ring[v].empty()) continue;
                Vec3 c{0.0, 0.0, 0.0};
                for (int w : ring[v]) c += mesh.positions[w];
                Vec3 d = c * (1.0 / double(ring[v].size())) - mesh.positions[v];
                // A degenerate star has no usable normal; the raw centroid
                // pull is the only way out of the needle, and the area gate
                // below still protects the shape.
                if (norm2(nrm[v]) > 0.5) d -= nrm[v] * dot(d, nrm[v]);
                if (d.x == 0.0 && d.y == 0.0 && d.z == 0.0) continue;
                double old_area = 0.0;
                for (int t : star[v]) old_area += areas[t];
                for (double w = 1.0; w >= 1.0 / 64.0; w *= 0.5) {
                    Vec3 p = mesh.positions[v] + d * w;
                    if (dm.wedge_constrained) p = clamp_to_wedge(p, dm.theta, rh);
                    if (p.x == mesh.positions[v].x && p.y == mesh.positions[v].y &&
                        p.z == mesh.positions[v].z)
                        continue;
                    cond_star_areas.clear();
                    bool ok = true;
                    double new_area = 0.0;
                    for (int t : star[v]) {
                        const auto& tri = mesh.triangles[t];
                        Vec3 q[3];
                        for (int k = 0; k < 3; ++k)
                            q[k] = tri[k] == v ? p : mesh.positions[tri[k]];
                        if (triangle_degenerate(q[0], q[1], q[2])) {
                            ok = false;
                            break;
                        }
                        const double a = triangle_area_g(m, q[0], q[1], q[2], cfg.rule);
                        cond_star_areas.push_back(a);
                        new_area += a;
                    }
                    if (!ok || new_area > old_area) continue;
                    mesh.positions[v] = p;
                    for (size_t i = 0; i < star[v].size(); ++i)
                        areas[star[v][i]] = cond_star_areas[i];
                    history_area += new_area - old_area;
                    ++moved;
                    break;
                }
            }
            return moved;
        };

        for (int it = 0; it < budget; ++it) {
            if (h1.movable() == 0) {  // the active set pinned everything
                if (stop.empty()) stop = "embeddedness_guard";
                break;
            }
            const std::vector<Vec3> grad = area_gradient_g(m, mesh, cfg.rule);
            const double residual = g_gradient_sup(m, mesh, grad, frozen);

            if (total_iter % cfg.history_stride == 0) {
                rep.area_history.push_back(history_area);
                rep.residual_history.push_back(residual);
            }
            if (cfg.verbose && total_iter % (50 * cfg.history_stride) == 0)
                std::fprintf(stderr, "stage %d iter %d area %.12g residual %.3e step %.3e\n",
                             stage, total_iter, history_area, residual, step);

            if (residual <= stage_tol) {
                converged = true;
                break;
            }

            double slope = h1.direction(mesh, grad, dir);
            if (!(slope > 0.0)) {  // gradient numerically null in the H^1 norm
                stop = "noise_floor";
                break;
            }

            // Armijo backtracking; in the floating-point tail (predicted
            // decrease under the noise floor) accept any step that does not
            // increase area, so every accepted step has delta <= 0.  A
            // direction pressing into the obstacle can fail the
            // unconstrained test even though the model predicts decrease;
            // when that happens, zero the direction at the vertices that
            // were still pressing at the smallest trial step (they rest on
            // an obstacle face and the direction points through it), refresh
            // the slope, and retry.  The mask is per-iteration only: resting
            // on a face is usually transient (the whole warm-start annulus
            // starts on the equatorial plane), and a permanent pin would
            // leave a spike behind once the neighborhood lifts off.
            const double noise = 64.0 * std::numeric_limits<double>::epsilon() * history_area;
            const double grown_step = std::min(step * 1.25, cfg.max_step);
            double first_predicted = 0.0;
            bool accepted = false;
            double delta = 0.0;
            for (int attempt = 0; attempt < 4 && !accepted; ++attempt) {
                if (attempt > 0) {
                    if (!dm.wedge_constrained) break;
                    bool masked = false;
                    for (int v = 0; v < mesh.vertex_count(); ++v)
                        if (pressed[v] && (dir[v].x != 0.0 || dir[v].y != 0.0 || dir[v].z != 0.0)) {
                            dir[v] = Vec3{0.0, 0.0, 0.0};
                            masked = true;
                        }
                    if (!masked) break;
                    slope = 0.0;
                    for (int v = 0; v < mesh.vertex_count(); ++v) slope -= dot(grad[v], dir[v]);
                    if (!(slope > 0.0)) break;
                }
                step = grown_step;
                first_predicted = cfg.armijo_c * step * slope;
                for (int backtracks = 0; backtracks < 60 && step > 1e-300; ++backtracks) {
                    for (int v = 0; v < mesh.vertex_count(); ++v) {
                        if (mesh.is_boundary[v]) continue;
                        Vec3 p = mesh.positions[v] + dir[v] * step;
                        if (dm.wedge_constrained) {
                            const Vec3 q = clamp_to_wedge(p, dm.theta, rh);
                            pressed[v] = (q.x != p.x || q.y != p.y || q.z != p.z) ? 1 : 0;
                            p = q;
                        }
                        trial.positions[v] = p;
                    }
                    if (!any_triangle_degenerate(trial)) {
                        triangle_areas_g(m, trial, cfg.rule, trial_areas);
                        delta = 0.0;
                        for (size_t t = 0; t < areas.size(); ++t)
                            delta += trial_areas[t] - areas[t];
                        const double predicted = cfg.armijo_c * step * slope;
                        if (delta <= -predicted || (predicted <= noise && delta <= 0.0)) {
                            accepted = true;
                            break;
                        }
                    }
                    step *= cfg.backtrack;
                }
            }
            if (!accepted) {
                if (first_predicted > noise)
                    throw std::runtime_error("solve_plateau: line search failed at iteration " +
                                             std::to_string(total_iter));
                stop = "noise_floor";
                break;
            }

            for (int v = 0; v < mesh.vertex_count(); ++v)
                if (!mesh.is_boundary[v]) mesh.positions[v] = trial.positions[v];
            areas.swap(trial_areas);
            history_area += delta;  // delta <= 0: history stays monotone
            ++total_iter;

            if (cfg.condition_stride > 0 && ++since_condition >= cfg.condition_stride) {
                since_condition = 0;
                if (condition_pass() > 0) {
                    // Cotan weights moved with the vertices; refresh the
                    // preconditioner so the next directions see them.
                    h1 = H1Solver(m, mesh, frozen);
                    if (cfg.verbose)
                        std::fprintf(stderr, "condition: iter %d area %.12g\n", total_iter,
                                     history_area);
                }
            }

            // Embeddedness guard: near a totally geodesic contact region
            // the degenerate tail of the descent can fold the triangulation
            // through itself while still lowering area.  Descent is not
            // allowed to trade embeddedness for area: on a detected
            // self-intersection, roll back to the last verified state, pin
            // the vertices of the offending triangles, and keep descending
            // the rest.  Every event pins at least one previously movable
            // vertex (pinned vertices cannot move, so a fresh fold always
            // involves a movable one), so this terminates; stop only when
            // no new vertex can be pinned.
            if (cfg.check_embedded && ++since_check >= kEmbedCheckInterval) {
                since_check = 0;
                const auto hits = self_intersections(mesh);
                if (hits.empty()) {
                    safe_positions = mesh.positions;
                    safe_areas = areas;
                    safe_history = history_area;
                    safe_iter = total_iter;
                    safe_records = rep.area_history.size();
                } else {
                    mesh.positions = safe_positions;
                    areas = safe_areas;
                    history_area = safe_history;
                    total_iter = safe_iter;
                    rep.area_history.resize(safe_records);
                    rep.residual_history.resize(safe_records);
                    int newly = 0;
                    if (freeze_events < kMaxFreezeEvents)
                        for (const auto& hit : hits)
                            for (int tid : {hit.tri_a, hit.tri_b})
                                for (int corner : mesh.triangles[tid])
                                    if (freeze_vertex(corner)) ++newly;
                    if (cfg.verbose) {
                        const Vec3 w = hits.front().seg_a;
                        std::fprintf(stderr,
                                     "guard: iter %d, %zu hits near (%.4f, %.4f, %.4f) |x|=%.4f, "
                                     "froze %d (total %d)\n",
                                     total_iter, hits.size(), w.x, w.y, w.z, norm(w), newly,
                                     freeze_events + 1);
                    }
                    if (newly == 0) {
                        stop = "embeddedness_guard";
                        break;
                    }
                    ++freeze_events;
                    h1 = H1Solver(m, mesh, frozen);
                    floor_streak = 0;
                    window_area = history_area;
                    window_count = 0;
                    continue;
                }
            }

            // A sustained run of accepted steps whose decrease stays under
            // the noise floor means no representable progress remains.
            if (delta > -noise) {
                if (++floor_streak >= 25) {
                    stop = "noise_floor";
                    break;
                }
            } else {
                floor_streak = 0;
            }

            if (++window_count >= 50) {
                if (window_area - history_area < 1e-9 * std::abs(history_area)) {
                    stop = "noise_floor";
                    break;
                }
                window_area = history_area;
                window_count = 0;
            }
        }
    }

    rep.iterations = total_iter;
    rep.converged = converged;
    rep.stop_reason = converged ? "converged" : (stop.empty() ? "max_iterations" : stop);
    rep.final_area = mesh_area_g(m, dm.mesh, cfg.rule);
    for (char f : frozen)
        if (f) ++rep.frozen_vertices;
    {
        const std::vector<Vec3> grad = area_gradient_g(m, dm.mesh, cfg.rule);
        rep.final_residual = g_gradient_sup(m, dm.mesh, grad, frozen);
        rep.area_history.push_back(history_area);  // the monotone record, not the re-measure
        rep.residual_history.push_back(rep.final_residual);
    }
    if (cfg.check_embedded) {
        const auto hits = self_intersections(dm.mesh);
        rep.embedded = hits.empty();
        for (const auto& hit : hits) rep.intersecting_triangles.emplace_back(hit.tri_a, hit.tri_b);
    }
    return rep;
}

void export_solve_report_csv(const SolveReport& report, const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) throw std::runtime_error("export_solve_report_csv: cannot open " + path.string());
    std::fprintf(f,
                 "# stop_reason=%s iterations=%d final_area=%.17g final_residual=%.17g "
                 "embedded=%d frozen=%d\n",
                 report.stop_reason.c_str(), report.iterations, report.final_area,
                 report.final_residual, report.embedded ? 1 : 0, report.frozen_vertices);
    std::fprintf(f, "# refine_iterations=");
    for (size_t i = 0; i < report.refine_iterations.size(); ++i)
        std::fprintf(f, "%s%d", i ? "," : "", report.refine_iterations[i]);
    std::fprintf(f, "\nrecord,area,residual\n");
    for (size_t i = 0; i < report.area_history.size(); ++i)
        std::fprintf(f, "%zu,%.17g,%.17g\n", i, report.area_history[i],
                     report.residual_history[i]);
    std::fclose(f);
}

namespace {

// Previous outer-circle vertices ordered by azimuthal parameter; the ends
// are the two outer corners (CArc,0) and (GammaThetaRadial,0).
std::vector<std::pair<double, int>> outer_circle_vertices(const DiskMesh& dm) {
    std::vector<std::pair<double, int>> ring;
    for (int v = 0; v < dm.mesh.vertex_count(); ++v) {
        if (!dm.boundary_param[v]) continue;
        const BoundaryParam& bp = *dm.boundary_param[v];
        if (bp.tag == ArcTag::CArc)
            ring.emplace_back(bp.t, v);
        else if (bp.tag == ArcTag::GammaThetaRadial && bp.t == 0.0)
            ring.emplace_back(1.0, v);
    }
    std::sort(ring.begin(), ring.end());
    if (ring.size() < 3 || ring.front().first != 0.0 || ring.back().first != 1.0)
        throw std::runtime_error("sweep_R: previous solution has no usable outer circle");
    return ring;
}

// Extends the solved wedge at R_prev by a flat annular sector out to R_new.
DiskMesh extend_with_annulus(const DiskMesh& prev, double R_new) {
    const double m = prev.m;
    const double theta = prev.theta;
    const double rh = horizon_radius(m);
    const double R_prev = prev.R;
    if (!(R_new > R_prev)) throw std::invalid_argument("sweep_R: radii must increase");

    const auto ring0 = outer_circle_vertices(prev);
    const int n_ang = static_cast<int>(ring0.size());
    const double dalpha = theta / (n_ang - 1);
    const int n_r = std::max(
        1, static_cast<int>(std::ceil(std::log(R_new / R_prev) / std::log1p(dalpha))));

    DiskMesh out;
    out.theta = theta;
    out.R = R_new;
    out.m = m;
    out.wedge_constrained = prev.wedge_constrained;
    out.mesh = prev.mesh;
    out.boundary_param = prev.boundary_param;

    // The old boundary params live on [rh, R_prev]; remap radial arms to
    // [rh, R_new] and open the old outer circle into the interior.
    for (int v = 0; v < out.mesh.vertex_count(); ++v) {
        if (!out.boundary_param[v]) continue;
        BoundaryParam& bp = *out.boundary_param[v];
        switch (bp.tag) {
            case ArcTag::Gamma0Radial:
                bp.t = bp.t * (R_prev - rh) / (R_new - rh);
                break;
            case ArcTag::GammaThetaRadial: {
                const double r = R_prev + bp.t * (rh - R_prev);
                bp.t = (R_new - r) / (R_new - rh);
                break;
            }
            case ArcTag::CArc:
                if (bp.t == 0.0) {  // corner at azimuth 0 joins the radial arm
                    bp.tag = ArcTag::Gamma0Radial;
                    bp.t = (R_prev - rh) / (R_new - rh);
                } else {
                    out.boundary_param[v].reset();
                    out.mesh.is_boundary[v] = 0;
                }
                break;
            default:
                break;  // horizon arcs are untouched
        }
    }

    // Ring vertex ids: ring[0] is the previous outer circle verbatim.
    std::vector<std::vector<int>> ring(n_r + 1, std::vector<int>(n_ang));
    for (int j = 0; j < n_ang; ++j) ring[0][j] = ring0[j].second;
    for (int k = 1; k <= n_r; ++k) {
        const double r_k = R_prev * std::pow(R_new / R_prev, static_cast<double>(k) / n_r);
        for (int j = 0; j < n_ang; ++j) {
            const double alpha = theta * ring0[j].first;
            const int id = out.mesh.vertex_count();
            ring[k][j] = id;
            out.mesh.positions.push_back(
                {r_k * std::cos(alpha), r_k * std::sin(alpha), 0.0});
            bool boundary = true;
            BoundaryParam bp;
            if (k == n_r && j == 0) {
                bp = {ArcTag::CArc, 0.0};
            } else if (k == n_r && j == n_ang - 1) {
                bp = {ArcTag::GammaThetaRadial, 0.0};
            } else if (k == n_r) {
                bp = {ArcTag::CArc, ring0[j].first};
            } else if (j == 0) {
                bp = {ArcTag::Gamma0Radial, (r_k - rh) / (R_new - rh)};
            } else if (j == n_ang - 1) {
                bp = {ArcTag::GammaThetaRadial, (R_new - r_k) / (R_new - rh)};
            } else {
                boundary = false;
            }
            out.mesh.is_boundary.push_back(boundary ? 1 : 0);
            out.boundary_param.push_back(boundary ? std::optional<BoundaryParam>(bp)
                                                  : std::nullopt);
        }
    }

    // Two triangles per annulus quad, wound to match the disk orientation
    // (the old outer circle runs with increasing azimuth).
    for (int k = 0; k < n_r; ++k)
        for (int j = 0; j + 1 < n_ang; ++j) {
            out.mesh.triangles.push_back({ring[k][j], ring[k + 1][j], ring[k + 1][j + 1]});
            out.mesh.triangles.push_back({ring[k][j], ring[k + 1][j + 1], ring[k][j + 1]});
        }

    out.reproject_boundary();
    validate(out.mesh);
    return out;
}

}  // namespace

SweepResult sweep_R(double theta, double m, const std::vector<double>& radii, int n_per_arc,
                    int refinement_level, const SolverConfig& cfg) {
    if (radii.empty()) throw std::invalid_argument("sweep_R: no radii");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("sweep_R: radii must be strictly increasing");

    DiskMesh dm = init_disk_mesh(build_contour(theta, radii[0], m, n_per_arc), refinement_level);
    SolveReport first = solve_plateau(dm, cfg);
    SweepResult sweep = continue_sweep(std::move(dm), radii, cfg);
    sweep.reports[0] = std::move(first);
    return sweep;
}

SweepResult continue_sweep(DiskMesh start, const std::vector<double>& radii,
                           const SolverConfig& cfg) {
    if (radii.empty()) throw std::invalid_argument("continue_sweep: no radii");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("continue_sweep: radii must be strictly increasing");
    if (std::abs(radii.front() - start.R) > 1e-12 * std::max(1.0, radii.front()))
        throw std::invalid_argument("continue_sweep: radii.front() must equal the start mesh R");

    SweepResult sweep;
    sweep.radii = radii;
    SolveReport placeholder;
    placeholder.converged = true;
    placeholder.stop_reason = "warm_start_input";
    sweep.reports.push_back(std::move(placeholder));
    sweep.meshes.push_back(std::move(start));

    const double m = sweep.meshes.front().m;

    SolverConfig warm_cfg = cfg;
    warm_cfg.refine_rounds = 0;
    DiskMesh dm;
    for (size_t i = 1; i < radii.size(); ++i) {
        dm = extend_with_annulus(sweep.meshes.back(), radii[i]);
        sweep.reports.push_back(solve_plateau(dm, warm_cfg));
        sweep.meshes.push_back(dm);
    }

    const double r_lo = horizon_radius(m) * (1.0 - 1e-9);
    const double r_hi = radii.front() * (1.0 + 1e-9);
    for (size_t i = 0; i + 1 < sweep.meshes.size(); ++i) {
        const auto in_window = [&](const Vec3& p) {
            const double r = norm(p);
            return r >= r_lo && r <= r_hi;
        };
        sweep.hausdorff.push_back(
            hausdorff_distance(sweep.meshes[i].mesh, sweep.meshes[i + 1].mesh, in_window));
    }
    return sweep;
}

}  // namespace schwarz
