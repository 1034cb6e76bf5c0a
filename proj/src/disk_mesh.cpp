#include "schwarzlab/disk_mesh.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace schwarz {

namespace {

ArcTag next_arc(ArcTag tag) {
    switch (tag) {
        case ArcTag::Gamma0Horizon: return ArcTag::Gamma0Radial;
        case ArcTag::Gamma0Radial: return ArcTag::CArc;
        case ArcTag::CArc: return ArcTag::GammaThetaRadial;
        case ArcTag::GammaThetaRadial: return ArcTag::GammaThetaHorizon;
        case ArcTag::GammaThetaHorizon: return ArcTag::Gamma0Horizon;
    }
    throw std::logic_error("next_arc");
}

// Re-express a corner parameter on the given arc when possible; corners are
// shared between consecutive arcs as (tag, 1) == (next(tag), 0).
std::optional<BoundaryParam> on_arc(const BoundaryParam& p, ArcTag want) {
    if (p.tag == want) return p;
    if (p.t == 0.0 && next_arc(want) == p.tag) return BoundaryParam{want, 1.0};
    if (p.t == 1.0 && next_arc(p.tag) == want) return BoundaryParam{want, 0.0};
    return std::nullopt;
}

// Midpoint parameter of a boundary edge; endpoints may sit on adjacent arcs
// when one of them is a corner.
BoundaryParam edge_midpoint_param(const BoundaryParam& a, const BoundaryParam& b) {
    for (ArcTag want : {a.tag, b.tag}) {
        const auto pa = on_arc(a, want);
        const auto pb = on_arc(b, want);
        if (pa && pb) return {want, 0.5 * (pa->t + pb->t)};
    }
    throw std::runtime_error("disk_mesh: boundary edge spans non-adjacent arcs");
}

void smooth_interior(TriMesh& mesh, int sweeps) {
    const auto nbr = vertex_neighbors(mesh);
    double scale = 0.0;
    for (const Vec3& p : mesh.positions) scale = std::max(scale, norm(p));
    for (int it = 0; it < sweeps; ++it) {
        double moved = 0.0;
        for (int v = 0; v < mesh.vertex_count(); ++v) {  // Gauss-Seidel, fixed order
            if (mesh.is_boundary[v] || nbr[v].empty()) continue;
            Vec3 avg{};
            for (int u : nbr[v]) avg += mesh.positions[u];
            avg = avg / static_cast<double>(nbr[v].size());
            moved = std::max(moved, norm(avg - mesh.positions[v]));
            mesh.positions[v] = avg;
        }
        if (moved < 1e-12 * std::max(1.0, scale)) break;
    }
}

}  // namespace

void DiskMesh::reproject_boundary() {
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (!mesh.is_boundary[v]) continue;
        if (!boundary_param[v]) throw std::runtime_error("disk_mesh: boundary vertex without arc parameter");
        mesh.positions[v] = arc_point(theta, R, m, boundary_param[v]->tag, boundary_param[v]->t);
    }
}

DiskMesh init_disk_mesh(const Contour& contour, int refinement_level) {
    if (refinement_level < 0) throw std::invalid_argument("init_disk_mesh: negative refinement level");
    if (contour.samples.size() < 4) throw std::invalid_argument("init_disk_mesh: too few contour samples");

    DiskMesh dm;
    dm.theta = contour.theta;
    dm.R = contour.R;
    dm.m = contour.m;
    dm.wedge_constrained = true;

    // Boundary ring: contour samples without the closing duplicate.
    const int n = static_cast<int>(contour.samples.size()) - 1;
    for (int i = 0; i < n; ++i) {
        const ContourSample& s = contour.samples[i];
        dm.mesh.positions.push_back(s.position);
        dm.mesh.is_boundary.push_back(1);
        dm.boundary_param.push_back(BoundaryParam{s.tag, s.t});
    }
    // Fan apex at the ring centroid.
    Vec3 centroid{};
    for (int i = 0; i < n; ++i) centroid += dm.mesh.positions[i];
    dm.mesh.positions.push_back(centroid / static_cast<double>(n));
    dm.mesh.is_boundary.push_back(0);
    dm.boundary_param.push_back(std::nullopt);
    const int apex = n;
    for (int i = 0; i < n; ++i) dm.mesh.triangles.push_back({apex, i, (i + 1) % n});

    for (int level = 0; level < refinement_level; ++level) dm = refine_disk_mesh(dm);
    smooth_interior(dm.mesh, 2000);
    return dm;
}

DiskMesh refine_disk_mesh(const DiskMesh& dm) {
    DiskMesh out;
    out.theta = dm.theta;
    out.R = dm.R;
    out.m = dm.m;
    out.wedge_constrained = dm.wedge_constrained;

    std::map<int, std::pair<int, int>> parents;
    out.mesh = subdivide(dm.mesh, [&parents](int a, int b, int mid) { parents[mid] = {a, b}; });

    out.boundary_param = dm.boundary_param;
    out.boundary_param.resize(out.mesh.vertex_count(), std::nullopt);
    for (const auto& [mid, ab] : parents) {
        if (!out.mesh.is_boundary[mid]) continue;
        const auto& pa = dm.boundary_param[ab.first];
        const auto& pb = dm.boundary_param[ab.second];
        if (!pa || !pb) throw std::runtime_error("refine_disk_mesh: boundary midpoint lacks parent parameters");
        out.boundary_param[mid] = edge_midpoint_param(*pa, *pb);
    }
    out.reproject_boundary();
    return out;
}

}  // namespace schwarz
