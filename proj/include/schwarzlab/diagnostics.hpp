#pragma once

// Measurements of the geometric claims about computed minimal surfaces:
// region containment, sweep monotonicity, plane-slice topology, comparison
// area bounds, growth and end asymptotics of the assembled surface,
// stability of the quadratic form, and blow-up scaling identities.

#include <filesystem>
#include <string>
#include <vector>

#include "schwarzlab/assembly.hpp"
#include "schwarzlab/contour.hpp"
#include "schwarzlab/trimesh.hpp"

namespace schwarz {

struct ContainmentReport {
    // Largest signed violation over interior vertices of the four region
    // inequalities y >= 0, azimuth <= theta, z >= 0, |x| >= m/2
    // (positive = outside the region).
    double worst = 0.0;
    Vec3 worst_point;
    int worst_face = -1;  // 0..3 in the order above
};

ContainmentReport containment_check(const TriMesh& mesh, double theta, double m);

struct MonotonicityReport {
    bool applicable = true;        // false for identical inputs
    bool intersection_free = true;  // interiors (collar-excluded) disjoint
    bool one_sided = true;  // polar angle ordered the same way at all samples
    int crossings = 0;
    // Crossings discarded from `crossings` because they lie where both
    // surfaces hug the same totally geodesic face (horizon sphere or
    // equatorial plane) within the contact band: the continuum gap there is
    // below discretization scale, so ordering is not resolvable.
    int contact_crossings = 0;
    int ordering_direction = 0;    // sign of the common polar-angle offset
    double min_separation_g = 0.0;  // over matched (r, azimuth) sample pairs
    int samples = 0;
    std::string detail;
};

// Consecutive-pair comparison of an R-sweep: interiors must not cross, and
// at matched spherical directions (radius, azimuth) the polar angle of the
// larger-R surface sits on one side of the smaller-R surface consistently.
// Triangles touching either boundary are excluded from the crossing test
// (the surfaces share boundary arcs), and crossings inside the contact band
// (within contact_band * horizon radius of the horizon sphere or the
// equatorial plane) are counted separately, not as violations.
MonotonicityReport monotonicity_pair(const TriMesh& inner, const TriMesh& outer, double theta,
                                     double m, double contact_band = 0.01);
MonotonicityReport monotonicity_check(const std::vector<TriMesh>& sweep, double theta, double m,
                                      double contact_band = 0.01);

struct SliceReport {
    int components = 0;
    bool transverse = true;  // false = tangential slice, inconclusive
    // Distance from the polyline end points to the two analytic
    // contour-crossing points of the slice plane on the horizon arcs.
    double endpoint_error_a = 0.0;
    double endpoint_error_b = 0.0;
    std::vector<std::vector<Vec3>> polylines;  // chained slice curves
};

// Intersection of the mesh with the tilted plane through the origin with
// normal wedge_plane_normal(theta, phi).  Vertices closer than 1e-10 to the
// plane are moved 1e-9 along its normal first (deterministic
// transversality rule).
SliceReport plane_slice_check(const TriMesh& mesh, double theta, double phi, double m);

// Points where the slice plane P_{theta,phi} crosses the two horizon arcs:
// polar angle a* with tan(a*) = cos(phi) / (sin(phi) cos(theta/2)), at
// azimuth 0 and azimuth theta.
void slice_endpoints(double theta, double phi, double m, Vec3& a_point, Vec3& b_point);

struct AreaBoundReport {
    double lhs = 0.0;  // g-area of the mesh clipped to the wedge domain
    double rhs = 0.0;  // g-area of the domain boundary faces
    int straddling_triangles = 0;  // triangles cut by the domain boundary
};

AreaBoundReport area_bound_check(const TriMesh& mesh, const WedgeDomain& dom, double m);

struct GrowthFit {
    double exponent = 0.0;  // least-squares slope of log area vs log radius
    std::vector<double> radii;
    std::vector<double> areas;  // g-area of the surface with m/2 <= |x| <= r
};

// Growth of the asymptotically planar end: clips to the region outside the
// horizon sphere so the inverted inner end (a full isometric copy packed
// inside |x| < m/2) does not flatten the fit.  Needs >= 3 radii.
GrowthFit area_growth_fit(const WeldedSurface& surface, double m, std::vector<double> radii);

// sup |z| over surface vertices in each annulus between consecutive radii
// (distance to the equatorial plane); NaN marks an empty annulus.
std::vector<double> end_asymptotics(const WeldedSurface& surface, const std::vector<double>& radii);

// True when the last ceil(n/2) finite entries are non-increasing (1e-9
// slack).
bool non_increasing_tail(const std::vector<double>& series);

struct StabilityReport {
    double min_q = 0.0;             // min over test functions of Q(f)
    double min_q_normalized = 0.0;  // min of Q(f) / ||f||_g^2
    int functions = 0;
    int unfitted_support = 0;  // vertices with f != 0 but no curvature fit
};

// Q(f) = sum |grad f|^2 dA  -  sum (|A|_g^2 + Ric_radial) f^2 dA_g
// (the Dirichlet term is conformally invariant in dimension two, so it is
// the Euclidean P1 stiffness).  Test functions are per-vertex and must
// vanish on the boundary; nonzero boundary values throw.
StabilityReport stability_check(const TriMesh& mesh, double m,
                                const std::vector<std::vector<double>>& test_functions);

struct BlowupReport {
    double h_sup_rescaled = 0.0;  // sup Euclidean |H| of the rescaled mesh
    double h_bound = 0.0;         // 4 / (m lambda)
    double a_origin = 0.0;        // quadric-fit |A| at the image of q
    double a_target = 0.0;        // (1 + m/(2|q|))^2
};

// Rescale X -> lambda (X - q) and measure the Euclidean curvature
// quantities whose limits the blow-up argument pins down: sup |H| against
// 4/(m lambda), and |A| at the origin against (1+m/(2|q|))^2 when lambda
// is |A^M(q)|_g.  The |H| sup skips vertices inside the obstacle contact
// band (same rationale as monotonicity_pair): the discrete estimator sees
// parametrization noise there, not surface curvature.
BlowupReport blowup_scaling_check(const TriMesh& mesh, double m, const Vec3& q, double lambda,
                                  double contact_band = 0.01);

struct DiagnosticsEntry {
    std::string check_id;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string provenance;
};

struct DiagnosticsReport {
    std::vector<DiagnosticsEntry> entries;
    bool all_pass() const;
};

void export_diagnostics_csv(const DiagnosticsReport& report, const std::filesystem::path& path);
std::string diagnostics_summary(const DiagnosticsReport& report);

}  // namespace schwarz
