#include "schwarzlab/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "schwarzlab/spatial.hpp"

namespace schwarz {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::string point_string(const Vec3& p) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "(%.6g, %.6g, %.6g)", p.x, p.y, p.z);
    return buf;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 d = b - a;
    const double len2 = norm2(d);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + d * t));
}

// azimuth in [0, 2 pi)
double azimuth_of(const Vec3& p) {
    double a = std::atan2(p.y, p.x);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

struct ClassParts {
    std::vector<std::pair<int, int>> edges;
};

}  // namespace

double default_weld_tolerance(double m) { return 1e-6 * 0.5 * m; }

std::vector<TriMesh> orbit_meshes(const TriMesh& piece, const IsometryGroup& group) {
    std::vector<TriMesh> copies(group.elements.size());
#pragma omp parallel for schedule(dynamic)
    for (int e = 0; e < static_cast<int>(group.elements.size()); ++e) {
        const Isometry& t = group.elements[e];
        TriMesh& copy = copies[e];
        copy = piece;
        for (Vec3& p : copy.positions) p = apply_isometry(t, p);
        if (winding_flip(t))
            for (auto& tri : copy.triangles) std::swap(tri[1], tri[2]);
    }
    return copies;
}

WeldedSurface weld_copies(const std::vector<TriMesh>& copies, double tolerance) {
    if (copies.empty()) throw std::invalid_argument("weld_copies: no copies");
    if (!(tolerance >= 0.0)) throw std::invalid_argument("weld_copies: negative tolerance");
    WeldResult wr = weld_meshes(copies, tolerance);

    const auto incidence = edge_incidence(wr.mesh);
    std::vector<std::pair<int, int>> boundary_edges;
    for (const auto& [edge, tris] : incidence) {
        if (tris.size() > 2)
            throw std::runtime_error(
                "weld_copies: fold (edge with " + std::to_string(tris.size()) +
                " incident triangles) at " + point_string(wr.mesh.positions[edge.first]));
        if (tris.size() == 1) boundary_edges.push_back(edge);
    }
    // A boundary vertex lying on a non-incident boundary segment is a seam
    // the merge could not close: the two sides sample the curve differently.
    for (int v = 0; v < wr.mesh.vertex_count(); ++v) {
        if (!wr.mesh.is_boundary[v]) continue;
        for (const auto& [a, b] : boundary_edges) {
            if (a == v || b == v) continue;
            if (point_segment_distance(wr.mesh.positions[v], wr.mesh.positions[a],
                                       wr.mesh.positions[b]) < tolerance)
                throw std::runtime_error("weld_copies: gap (unmerged seam) at " +
                                         point_string(wr.mesh.positions[v]));
        }
    }

    WeldedSurface s;
    s.mesh = std::move(wr.mesh);
    s.element_of_triangle = std::move(wr.triangle_source);
    s.source_triangle = std::move(wr.triangle_index);
    s.weld_tolerance = tolerance;
    return s;
}

WeldedSurface assemble_surface(const TriMesh& piece, const IsometryGroup& group) {
    return weld_copies(orbit_meshes(piece, group), default_weld_tolerance(group.m));
}

SurfaceTopology euler_genus(const WeldedSurface& surface) {
    const EulerCharacteristic ec = euler_characteristic(surface.mesh);
    SurfaceTopology topo;
    topo.chi = ec.chi;
    topo.boundary_components = ec.boundary_loop_count;
    topo.connected = ec.connected;
    topo.oriented = ec.oriented;
    const int num = 2 - ec.chi - ec.boundary_loop_count;
    if (num % 2 != 0)
        throw std::runtime_error("euler_genus: half-integer genus (chi " +
                                 std::to_string(ec.chi) + ", boundary loops " +
                                 std::to_string(ec.boundary_loop_count) +
                                 "): welding defect");
    topo.genus = num / 2;
    return topo;
}

double symmetry_residual(const WeldedSurface& surface, const IsometryGroup& group) {
    const TriangleGrid grid(surface.mesh);
    double worst = 0.0;
    for (const Isometry& t : group.elements) {
        double elem_max = 0.0;
#pragma omp parallel for reduction(max : elem_max) schedule(dynamic, 256)
        for (int v = 0; v < surface.mesh.vertex_count(); ++v)
            elem_max = std::max(elem_max,
                                grid.distance(apply_isometry(t, surface.mesh.positions[v])));
        worst = std::max(worst, elem_max);
    }
    return worst;
}

SeamDecomposition seam_decomposition(const WeldedSurface& surface, const IsometryGroup& group) {
    SeamDecomposition dec;
    const TriMesh& mesh = surface.mesh;
    const double rh = 0.5 * group.m;
    const double theta = kPi / (group.tau + 1);
    const int n_classes = 2 * (group.tau + 1);  // azimuths k * theta tile 2 pi
    const double ctol = std::max(10.0 * surface.weld_tolerance, 1e-9 * rh);

    std::vector<std::pair<int, int>> seam_edges;
    for (const auto& [edge, tris] : edge_incidence(mesh))
        if (tris.size() == 2 && surface.element_of_triangle[tris[0]] !=
                                    surface.element_of_triangle[tris[1]])
            seam_edges.push_back(edge);

    auto note = [&dec](const std::string& msg) {
        if (dec.detail.empty()) dec.detail = msg;
    };

    // kind -> azimuth class -> edges
    std::map<int, ClassParts> meridians, rays;
    for (const auto& [a, b] : seam_edges) {
        const Vec3& pa = mesh.positions[a];
        const Vec3& pb = mesh.positions[b];
        const bool horizon = std::abs(norm(pa) - rh) <= ctol && std::abs(norm(pb) - rh) <= ctol;
        const bool equator = std::abs(pa.z) <= ctol && std::abs(pb.z) <= ctol;
        if (!horizon && !equator) {
            ++dec.unclassified_edges;
            note("seam edge off both the horizon and the equator at " + point_string(pa));
            continue;
        }
        const Vec3& far = std::hypot(pa.x, pa.y) >= std::hypot(pb.x, pb.y) ? pa : pb;
        const double az = azimuth_of(far);
        const int k = static_cast<int>(std::llround(az / theta)) % n_classes;
        const double err = std::abs(az - std::llround(az / theta) * theta);
        dec.max_azimuth_error = std::max(dec.max_azimuth_error, err);
        (horizon ? meridians : rays)[k].edges.emplace_back(a, b);
    }

    auto emit = [&](SeamKind kind, int k, const ClassParts& parts) {
        SeamCurve curve;
        curve.kind = kind;
        curve.azimuth_class = k;
        curve.edge_count = static_cast<int>(parts.edges.size());
        std::map<int, int> degree, leader;
        for (const auto& [a, b] : parts.edges) {
            ++degree[a];
            ++degree[b];
            leader.emplace(a, a);
            leader.emplace(b, b);
        }
        std::function<int(int)> find = [&](int v) {
            while (leader[v] != v) v = leader[v] = leader[leader[v]];
            return v;
        };
        for (const auto& [a, b] : parts.edges) leader[find(a)] = find(b);
        std::map<int, int> roots;
        for (const auto& [v, _] : degree) ++roots[find(v)];
        curve.component_count = static_cast<int>(roots.size());
        for (const auto& [v, d] : degree)
            if (d == 1) curve.endpoints.push_back(mesh.positions[v]);
        dec.curves.push_back(std::move(curve));
    };
    for (const auto& [k, parts] : meridians) emit(SeamKind::HorizonMeridian, k, parts);
    for (const auto& [k, parts] : rays) emit(SeamKind::EquatorialRay, k, parts);
    dec.meridian_count = static_cast<int>(meridians.size());
    dec.ray_count = static_cast<int>(rays.size());

    bool meridians_ok = true;
    for (const SeamCurve& c : dec.curves) {
        if (c.component_count != 1) {
            note("seam class in " + std::to_string(c.component_count) + " components at azimuth " +
                 std::to_string(c.azimuth_class * theta));
            meridians_ok = false;
        }
        if (c.kind != SeamKind::HorizonMeridian) continue;
        // An intact meridian runs pole to pole.
        int poles_hit = 0;
        for (const Vec3& p : c.endpoints) {
            if (norm(p - Vec3{0.0, 0.0, rh}) <= ctol || norm(p - Vec3{0.0, 0.0, -rh}) <= ctol)
                ++poles_hit;
        }
        if (c.endpoints.size() != 2 || poles_hit != 2) {
            note("horizon seam at azimuth " + std::to_string(c.azimuth_class * theta) +
                 " does not run pole to pole");
            meridians_ok = false;
        }
    }

    // Fan angles of pole-incident seam edges.
    if (dec.meridian_count > 0) {
        for (const double pole_z : {rh, -rh}) {
            int pole = -1;
            for (int v = 0; v < mesh.vertex_count(); ++v)
                if (norm(mesh.positions[v] - Vec3{0.0, 0.0, pole_z}) <= ctol) {
                    pole = v;
                    break;
                }
            if (pole < 0) {
                note("no welded vertex at the pole z = " + std::to_string(pole_z));
                meridians_ok = false;
                continue;
            }
            std::vector<double> az;
            for (const auto& [a, b] : seam_edges)
                if (a == pole || b == pole)
                    az.push_back(azimuth_of(mesh.positions[a == pole ? b : a]));
            if (az.size() < 2) {
                note("fewer than two seam edges at the pole z = " + std::to_string(pole_z));
                meridians_ok = false;
                continue;
            }
            std::sort(az.begin(), az.end());
            for (size_t i = 0; i < az.size(); ++i) {
                const double gap = i + 1 < az.size() ? az[i + 1] - az[i]
                                                     : az.front() + 2.0 * kPi - az.back();
                dec.max_pole_gap_error = std::max(dec.max_pole_gap_error, std::abs(gap - theta));
            }
        }
    }

    dec.decomposed = dec.unclassified_edges == 0 && meridians_ok && !seam_edges.empty();
    if (seam_edges.empty()) note("no seam edges");
    return dec;
}

void export_provenance_csv(const WeldedSurface& surface, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("export_provenance_csv: cannot open " + path);
    std::fprintf(f, "triangle,element,source_triangle\n");
    for (size_t t = 0; t < surface.element_of_triangle.size(); ++t)
        std::fprintf(f, "%zu,%d,%d\n", t, surface.element_of_triangle[t],
                     surface.source_triangle[t]);
    std::fclose(f);
}

}  // namespace schwarz
