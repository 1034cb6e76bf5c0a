#pragma once

// Disk-topology meshes spanning a Plateau contour.  Boundary vertices carry
// exact arc parameters so refinement can reproject midpoints onto the true
// contour instead of chordal midpoints.

#include <optional>

#include "schwarzlab/contour.hpp"
#include "schwarzlab/trimesh.hpp"

namespace schwarz {

struct BoundaryParam {
    ArcTag tag;
    double t;
};

struct DiskMesh {
    TriMesh mesh;
    std::vector<std::optional<BoundaryParam>> boundary_param;  // per vertex
    double theta = 0.0, R = 0.0, m = 0.0;

    // True for meshes spanning the standard contour: the minimizer lies in
    // the closed region bounded by the two vertical half-planes (azimuth in
    // [0, theta]), the equatorial plane (z >= 0), and the horizon sphere
    // (|x| >= m/2), so the solver may treat that region as an obstacle and
    // project trial positions back into it.  Leave false for hand-built
    // meshes over other contours.
    bool wedge_constrained = false;

    void reproject_boundary();  // snap boundary vertices onto their arcs
};

// Fan triangulation over the contour samples, refinement_level rounds of
// 1->4 subdivision with boundary midpoints placed by arc parameter, then
// uniform-weight Laplacian smoothing of the interior (boundary fixed) to
// open up the fan into a usable starting surface.
// Triangle count is 4^level * (samples - 1); V - E + F = 1 at every level.
DiskMesh init_disk_mesh(const Contour& contour, int refinement_level);

// One 1->4 round preserving exact boundary placement.
DiskMesh refine_disk_mesh(const DiskMesh& dm);

}  // namespace schwarz
