#pragma once

// Assemble the genus-tau surface: orbit of the fundamental piece under the
// discrete isometry group, welded along the shared boundary geodesics, with
// topology, symmetry, and seam-structure measurements.

#include <string>
#include <vector>

#include "schwarzlab/isometry.hpp"
#include "schwarzlab/trimesh.hpp"

namespace schwarz {

// 1e-6 * (m/2): seams are hard-pinned boundary vertices mapped by exact
// isometries, so any mismatch is floating-point noise.
double default_weld_tolerance(double m);

// One transformed copy per group element (element order preserved).
// Chamber-parity elements get their triangle winding flipped so the welded
// union is consistently oriented.
std::vector<TriMesh> orbit_meshes(const TriMesh& piece, const IsometryGroup& group);

struct WeldedSurface {
    TriMesh mesh;
    std::vector<int> element_of_triangle;  // copy (= group element) per triangle
    std::vector<int> source_triangle;      // triangle id within that copy
    double weld_tolerance = 0.0;
};

// Merge copies along coincident boundary vertices.  Fails when a seam is
// left open (a boundary vertex lying on a non-incident boundary segment:
// mismatched seam sampling) or over-welded (an edge with more than two
// incident triangles), reporting the location.
WeldedSurface weld_copies(const std::vector<TriMesh>& copies, double tolerance);

// orbit_meshes + weld_copies at the default tolerance.
WeldedSurface assemble_surface(const TriMesh& piece, const IsometryGroup& group);

struct SurfaceTopology {
    int chi = 0;
    int boundary_components = 0;
    int genus = 0;
    bool connected = false;
    bool oriented = false;
};

// chi = V - E + F, genus = (2 - chi - b)/2; throws when the genus formula
// does not divide evenly (a welding defect).
SurfaceTopology euler_genus(const WeldedSurface& surface);

// max over group elements h of the one-sided Hausdorff distance (Euclidean,
// vertex to surface) from h(vertex set) to the surface.
double symmetry_residual(const WeldedSurface& surface, const IsometryGroup& group);

enum class SeamKind { HorizonMeridian, EquatorialRay };

struct SeamCurve {
    SeamKind kind = SeamKind::HorizonMeridian;
    int azimuth_class = 0;  // seam azimuth ~ class * pi/(tau+1)
    int edge_count = 0;
    int component_count = 0;      // 1 for an intact seam
    std::vector<Vec3> endpoints;  // degree-1 vertices of the curve
};

struct SeamDecomposition {
    std::vector<SeamCurve> curves;  // meridians then rays, by azimuth class
    int meridian_count = 0;
    int ray_count = 0;
    int unclassified_edges = 0;
    double max_azimuth_error = 0.0;   // seam azimuths vs class * theta
    double max_pole_gap_error = 0.0;  // consecutive pole azimuth gaps vs theta
    bool decomposed = false;  // all edges classified, one component per curve,
                              // meridians running pole to pole
    std::string detail;       // first defect; empty when decomposed
};

// Classify every seam edge (an interior edge whose two triangles come from
// different copies) as a horizon meridian (both endpoints at |x| = m/2) or
// an equatorial ray (both endpoints at z = 0), grouped by the nearest
// azimuth multiple of pi/(tau+1); measure the fan angles of pole-incident
// seam edges.
SeamDecomposition seam_decomposition(const WeldedSurface& surface, const IsometryGroup& group);

// CSV sidecar: triangle, element, source_triangle.
void export_provenance_csv(const WeldedSurface& surface, const std::string& path);

}  // namespace schwarz
