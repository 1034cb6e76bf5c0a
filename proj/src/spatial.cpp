#include "schwarzlab/spatial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace schwarz {
namespace {

constexpr double kPlaneEps = 1e-12;

struct Crossing {
    double t0 = 0.0, t1 = 0.0;
    Vec3 q0, q1;
    bool ok = false;
};

// Crossing interval of triangle (v0,v1,v2) with the plane {n.x = d}, projected
// onto direction dir.  d0,d1,d2 are precomputed signed distances.
Crossing plane_crossing(const Vec3& v0, const Vec3& v1, const Vec3& v2, double d0, double d1,
                        double d2, const Vec3& dir) {
    Crossing out;
    std::array<Vec3, 2> pts;
    int count = 0;
    const Vec3 v[3] = {v0, v1, v2};
    const double d[3] = {d0, d1, d2};
    for (int i = 0; i < 3 && count < 2; ++i) {
        if (std::abs(d[i]) <= 0.0) pts[count++] = v[i];  // vertex on plane
    }
    for (int i = 0; i < 3 && count < 2; ++i) {
        const int j = (i + 1) % 3;
        if (d[i] * d[j] < 0.0) {
            const double w = d[i] / (d[i] - d[j]);
            pts[count++] = v[i] + (v[j] - v[i]) * w;
        }
    }
    if (count == 0) return out;
    if (count == 1) pts[1] = pts[0];
    out.q0 = pts[0];
    out.q1 = pts[1];
    out.t0 = dot(dir, out.q0);
    out.t1 = dot(dir, out.q1);
    if (out.t0 > out.t1) {
        std::swap(out.t0, out.t1);
        std::swap(out.q0, out.q1);
    }
    out.ok = true;
    return out;
}

double orient2d(const double a[2], const double b[2], const double c[2]) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool point_in_tri2d(const double p[2], const double a[2], const double b[2], const double c[2]) {
    const double s0 = orient2d(a, b, p);
    const double s1 = orient2d(b, c, p);
    const double s2 = orient2d(c, a, p);
    const bool has_neg = (s0 < 0) || (s1 < 0) || (s2 < 0);
    const bool has_pos = (s0 > 0) || (s1 > 0) || (s2 > 0);
    return !(has_neg && has_pos);
}

bool segments_intersect2d(const double p0[2], const double p1[2], const double q0[2],
                          const double q1[2]) {
    const double d0 = orient2d(p0, p1, q0);
    const double d1 = orient2d(p0, p1, q1);
    const double d2 = orient2d(q0, q1, p0);
    const double d3 = orient2d(q0, q1, p1);
    if (((d0 > 0 && d1 < 0) || (d0 < 0 && d1 > 0)) && ((d2 > 0 && d3 < 0) || (d2 < 0 && d3 > 0)))
        return true;
    return false;
}

// Coplanar triangles: 2D overlap test in the dominant plane of n.
bool coplanar_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                        const Vec3& b1, const Vec3& b2, const Vec3& n, Vec3* witness) {
    int i0 = 0, i1 = 1;  // axes kept after dropping the dominant one
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    if (ax >= ay && ax >= az) {
        i0 = 1;
        i1 = 2;
    } else if (ay >= az) {
        i0 = 0;
        i1 = 2;
    }
    auto proj = [&](const Vec3& v, double out[2]) {
        out[0] = v[i0];
        out[1] = v[i1];
    };
    double A[3][2], B[3][2];
    proj(a0, A[0]);
    proj(a1, A[1]);
    proj(a2, A[2]);
    proj(b0, B[0]);
    proj(b1, B[1]);
    proj(b2, B[2]);
    const Vec3 av[3] = {a0, a1, a2};
    const Vec3 bv[3] = {b0, b1, b2};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (segments_intersect2d(A[i], A[(i + 1) % 3], B[j], B[(j + 1) % 3])) {
                if (witness) *witness = (av[i] + av[(i + 1) % 3]) * 0.5;
                return true;
            }
    for (int i = 0; i < 3; ++i)
        if (point_in_tri2d(A[i], B[0], B[1], B[2])) {
            if (witness) *witness = av[i];
            return true;
        }
    for (int j = 0; j < 3; ++j)
        if (point_in_tri2d(B[j], A[0], A[1], A[2])) {
            if (witness) *witness = bv[j];
            return true;
        }
    return false;
}

struct Box {
    Vec3 lo, hi;
};

Box triangle_box(const TriMesh& mesh, int t) {
    const Vec3& a = mesh.positions[mesh.triangles[t][0]];
    const Vec3& b = mesh.positions[mesh.triangles[t][1]];
    const Vec3& c = mesh.positions[mesh.triangles[t][2]];
    Box box;
    box.lo = Vec3{std::min({a.x, b.x, c.x}), std::min({a.y, b.y, c.y}), std::min({a.z, b.z, c.z})};
    box.hi = Vec3{std::max({a.x, b.x, c.x}), std::max({a.y, b.y, c.y}), std::max({a.z, b.z, c.z})};
    return box;
}

bool boxes_overlap(const Box& a, const Box& b, double pad) {
    return a.lo.x <= b.hi.x + pad && b.lo.x <= a.hi.x + pad && a.lo.y <= b.hi.y + pad &&
           b.lo.y <= a.hi.y + pad && a.lo.z <= b.hi.z + pad && b.lo.z <= a.hi.z + pad;
}

bool share_vertex(const std::array<int, 3>& ta, const std::array<int, 3>& tb) {
    for (int i : ta)
        for (int j : tb)
            if (i == j) return true;
    return false;
}

}  // namespace

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));

    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

bool triangles_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                         const Vec3& b1, const Vec3& b2, Vec3* seg_a, Vec3* seg_b) {
    const Vec3 na = cross(a1 - a0, a2 - a0);
    const Vec3 nb = cross(b1 - b0, b2 - b0);
    const double scale =
        std::max({std::abs(a0.x), std::abs(a0.y), std::abs(a0.z), std::abs(b0.x), std::abs(b0.y),
                  std::abs(b0.z), norm(a1), norm(a2), norm(b1), norm(b2), 1.0});
    const double eps = kPlaneEps * scale;

    auto snap = [&](double d) { return std::abs(d) < eps * std::max(1.0, scale) ? 0.0 : d; };

    double da0 = snap(dot(nb, a0 - b0) / std::max(norm(nb), 1e-300));
    double da1 = snap(dot(nb, a1 - b0) / std::max(norm(nb), 1e-300));
    double da2 = snap(dot(nb, a2 - b0) / std::max(norm(nb), 1e-300));
    if ((da0 > 0 && da1 > 0 && da2 > 0) || (da0 < 0 && da1 < 0 && da2 < 0)) return false;

    double db0 = snap(dot(na, b0 - a0) / std::max(norm(na), 1e-300));
    double db1 = snap(dot(na, b1 - a0) / std::max(norm(na), 1e-300));
    double db2 = snap(dot(na, b2 - a0) / std::max(norm(na), 1e-300));
    if ((db0 > 0 && db1 > 0 && db2 > 0) || (db0 < 0 && db1 < 0 && db2 < 0)) return false;

    const Vec3 dir = cross(na, nb);
    const double dir_len = norm(dir);
    if (dir_len < eps * std::max(norm(na), norm(nb))) {
        // Coplanar (or one triangle degenerate).
        Vec3 witness;
        if (coplanar_intersect(a0, a1, a2, b0, b1, b2, norm(na) > norm(nb) ? na : nb,
                               &witness)) {
            if (seg_a) *seg_a = witness;
            if (seg_b) *seg_b = witness;
            return true;
        }
        return false;
    }

    const Crossing ca = plane_crossing(a0, a1, a2, da0, da1, da2, dir);
    const Crossing cb = plane_crossing(b0, b1, b2, db0, db1, db2, dir);
    if (!ca.ok || !cb.ok) return false;

    const double lo = std::max(ca.t0, cb.t0);
    const double hi = std::min(ca.t1, cb.t1);
    if (lo > hi) return false;
    if (seg_a) *seg_a = (ca.t0 >= cb.t0) ? ca.q0 : cb.q0;
    if (seg_b) *seg_b = (ca.t1 <= cb.t1) ? ca.q1 : cb.q1;
    return true;
}

TriangleGrid::TriangleGrid(const TriMesh& mesh) : mesh_(&mesh) {
    const double inf = std::numeric_limits<double>::infinity();
    lo_ = Vec3{inf, inf, inf};
    hi_ = Vec3{-inf, -inf, -inf};
    double mean_extent = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Box box = triangle_box(mesh, t);
        lo_.x = std::min(lo_.x, box.lo.x);
        lo_.y = std::min(lo_.y, box.lo.y);
        lo_.z = std::min(lo_.z, box.lo.z);
        hi_.x = std::max(hi_.x, box.hi.x);
        hi_.y = std::max(hi_.y, box.hi.y);
        hi_.z = std::max(hi_.z, box.hi.z);
        mean_extent += std::max({box.hi.x - box.lo.x, box.hi.y - box.lo.y, box.hi.z - box.lo.z});
    }
    if (mesh.triangle_count() == 0) {
        lo_ = Vec3{0, 0, 0};
        hi_ = Vec3{1, 1, 1};
    }
    mean_extent = mesh.triangle_count() > 0 ? mean_extent / mesh.triangle_count() : 1.0;
    cell_ = std::max(mean_extent, 1e-12);
    const Vec3 span = hi_ - lo_;
    auto dims = [&](double extent) {
        return std::clamp(static_cast<int>(std::ceil(extent / cell_)) + 1, 1, 192);
    };
    nx_ = dims(span.x);
    ny_ = dims(span.y);
    nz_ = dims(span.z);
    // Recompute the cell size so the clamped grid still covers the box.
    cell_ = std::max({span.x / nx_, span.y / ny_, span.z / nz_, cell_});
    cells_.assign(static_cast<size_t>(nx_) * ny_ * nz_, {});
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Box box = triangle_box(mesh, t);
        int ix0, iy0, iz0, ix1, iy1, iz1;
        cell_of(box.lo, ix0, iy0, iz0);
        cell_of(box.hi, ix1, iy1, iz1);
        for (int iz = iz0; iz <= iz1; ++iz)
            for (int iy = iy0; iy <= iy1; ++iy)
                for (int ix = ix0; ix <= ix1; ++ix) cells_[cell_index(ix, iy, iz)].push_back(t);
    }
}

void TriangleGrid::cell_of(const Vec3& p, int& ix, int& iy, int& iz) const {
    ix = std::clamp(static_cast<int>(std::floor((p.x - lo_.x) / cell_)), 0, nx_ - 1);
    iy = std::clamp(static_cast<int>(std::floor((p.y - lo_.y) / cell_)), 0, ny_ - 1);
    iz = std::clamp(static_cast<int>(std::floor((p.z - lo_.z) / cell_)), 0, nz_ - 1);
}

Vec3 TriangleGrid::closest_point(const Vec3& p) const {
    const TriMesh& mesh = *mesh_;
    double best = std::numeric_limits<double>::infinity();
    Vec3 best_point = p;
    int cx, cy, cz;
    cell_of(p, cx, cy, cz);
    const int max_shell = std::max({nx_, ny_, nz_});
    // Distance from p to the grid box: shells beyond (outside distance +
    // (r-1) cells) cannot beat a known best.
    const double dx = std::max({lo_.x - p.x, p.x - hi_.x, 0.0});
    const double dy = std::max({lo_.y - p.y, p.y - hi_.y, 0.0});
    const double dz = std::max({lo_.z - p.z, p.z - hi_.z, 0.0});
    const double outside = std::sqrt(dx * dx + dy * dy + dz * dz);
    for (int r = 0; r <= max_shell; ++r) {
        if (best < outside + (r - 1) * cell_) break;
        for (int iz = std::max(0, cz - r); iz <= std::min(nz_ - 1, cz + r); ++iz)
            for (int iy = std::max(0, cy - r); iy <= std::min(ny_ - 1, cy + r); ++iy)
                for (int ix = std::max(0, cx - r); ix <= std::min(nx_ - 1, cx + r); ++ix) {
                    const int shell =
                        std::max({std::abs(ix - cx), std::abs(iy - cy), std::abs(iz - cz)});
                    if (shell != r) continue;
                    for (int t : cells_[cell_index(ix, iy, iz)]) {
                        const Vec3 q = closest_point_on_triangle(
                            p, mesh.positions[mesh.triangles[t][0]],
                            mesh.positions[mesh.triangles[t][1]],
                            mesh.positions[mesh.triangles[t][2]]);
                        const double d = norm(q - p);
                        if (d < best) {
                            best = d;
                            best_point = q;
                        }
                    }
                }
    }
    return best_point;
}

double TriangleGrid::distance(const Vec3& p) const { return norm(closest_point(p) - p); }

std::vector<int> TriangleGrid::box_query(const Vec3& lo, const Vec3& hi) const {
    std::vector<int> out;
    std::vector<char> seen(mesh_->triangle_count(), 0);
    int ix0, iy0, iz0, ix1, iy1, iz1;
    cell_of(lo, ix0, iy0, iz0);
    cell_of(hi, ix1, iy1, iz1);
    for (int iz = iz0; iz <= iz1; ++iz)
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix)
                for (int t : cells_[cell_index(ix, iy, iz)])
                    if (!seen[t]) {
                        seen[t] = 1;
                        out.push_back(t);
                    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IntersectionHit> self_intersections(const TriMesh& mesh,
                                                const std::function<bool(int)>& skip,
                                                int max_hits) {
    std::vector<IntersectionHit> hits;
    TriangleGrid grid(mesh);
    for (int i = 0; i < mesh.triangle_count() && static_cast<int>(hits.size()) < max_hits; ++i) {
        if (skip && skip(i)) continue;
        const Box box = triangle_box(mesh, i);
        for (int j : grid.box_query(box.lo, box.hi)) {
            if (j <= i) continue;
            if (skip && skip(j)) continue;
            if (share_vertex(mesh.triangles[i], mesh.triangles[j])) continue;
            if (!boxes_overlap(box, triangle_box(mesh, j), 0.0)) continue;
            IntersectionHit hit;
            hit.tri_a = i;
            hit.tri_b = j;
            if (triangles_intersect(mesh.positions[mesh.triangles[i][0]],
                                    mesh.positions[mesh.triangles[i][1]],
                                    mesh.positions[mesh.triangles[i][2]],
                                    mesh.positions[mesh.triangles[j][0]],
                                    mesh.positions[mesh.triangles[j][1]],
                                    mesh.positions[mesh.triangles[j][2]], &hit.seg_a, &hit.seg_b)) {
                hits.push_back(hit);
                if (static_cast<int>(hits.size()) >= max_hits) break;
            }
        }
    }
    return hits;
}

std::vector<IntersectionHit> cross_intersections(const TriMesh& a, const TriMesh& b,
                                                 const std::function<bool(int)>& skip_a,
                                                 const std::function<bool(int)>& skip_b,
                                                 int max_hits) {
    std::vector<IntersectionHit> hits;
    TriangleGrid grid_b(b);
    for (int i = 0; i < a.triangle_count() && static_cast<int>(hits.size()) < max_hits; ++i) {
        if (skip_a && skip_a(i)) continue;
        const Box box = triangle_box(a, i);
        for (int j : grid_b.box_query(box.lo, box.hi)) {
            if (skip_b && skip_b(j)) continue;
            if (!boxes_overlap(box, triangle_box(b, j), 0.0)) continue;
            IntersectionHit hit;
            hit.tri_a = i;
            hit.tri_b = j;
            if (triangles_intersect(a.positions[a.triangles[i][0]], a.positions[a.triangles[i][1]],
                                    a.positions[a.triangles[i][2]], b.positions[b.triangles[j][0]],
                                    b.positions[b.triangles[j][1]], b.positions[b.triangles[j][2]],
                                    &hit.seg_a, &hit.seg_b)) {
                hits.push_back(hit);
                if (static_cast<int>(hits.size()) >= max_hits) break;
            }
        }
    }
    return hits;
}

double hausdorff_distance(const TriMesh& a, const TriMesh& b,
                          const std::function<bool(const Vec3&)>& region) {
    auto one_sided = [&](const TriMesh& from, const TriMesh& to) {
        TriangleGrid grid(to);
        double sup = 0.0;
        for (const Vec3& p : from.positions) {
            if (region && !region(p)) continue;
            sup = std::max(sup, grid.distance(p));
        }
        return sup;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace schwarz
