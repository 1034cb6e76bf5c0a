#pragma once

// Uniform-grid acceleration for point-to-mesh distance and pairwise
// triangle intersection tests.

#include <functional>
#include <vector>

#include "schwarzlab/trimesh.hpp"

namespace schwarz {

// Closest point on triangle (a, b, c) to p.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// True if the closed triangles intersect; when they do and seg_a/seg_b are
// non-null, an intersection segment (possibly degenerate to a point) is
// reported.
bool triangles_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                         const Vec3& b1, const Vec3& b2, Vec3* seg_a = nullptr, Vec3* seg_b = nullptr);

class TriangleGrid {
  public:
    explicit TriangleGrid(const TriMesh& mesh);

    // Distance from p to the mesh surface.
    double distance(const Vec3& p) const;
    Vec3 closest_point(const Vec3& p) const;

    const TriMesh& mesh() const { return *mesh_; }

    // Triangle ids whose boxes intersect the box [lo, hi].
    std::vector<int> box_query(const Vec3& lo, const Vec3& hi) const;

  private:
    const TriMesh* mesh_;
    Vec3 lo_, hi_;
    double cell_ = 1.0;
    int nx_ = 1, ny_ = 1, nz_ = 1;
    std::vector<std::vector<int>> cells_;

    int cell_index(int ix, int iy, int iz) const { return (iz * ny_ + iy) * nx_ + ix; }
    void cell_of(const Vec3& p, int& ix, int& iy, int& iz) const;
};

struct IntersectionHit {
    int tri_a = -1;
    int tri_b = -1;
    Vec3 seg_a, seg_b;  // intersection segment endpoints
};

// Intersections between non-adjacent triangles of one mesh (adjacent =
// sharing a vertex id).  skip(t) excludes triangles entirely.
std::vector<IntersectionHit> self_intersections(const TriMesh& mesh,
                                                const std::function<bool(int)>& skip = nullptr,
                                                int max_hits = 16);

// Intersections between triangles of two distinct meshes.
std::vector<IntersectionHit> cross_intersections(const TriMesh& a, const TriMesh& b,
                                                 const std::function<bool(int)>& skip_a = nullptr,
                                                 const std::function<bool(int)>& skip_b = nullptr,
                                                 int max_hits = 16);

// sup over vertices of `a` inside `region` of the distance to mesh `b`,
// symmetrized.  Returns 0 for empty regions.
double hausdorff_distance(const TriMesh& a, const TriMesh& b,
                          const std::function<bool(const Vec3&)>& region = nullptr);

}  // namespace schwarz
