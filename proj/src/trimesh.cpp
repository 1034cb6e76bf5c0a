#include "schwarzlab/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace schwarz {

namespace {

std::pair<int, int> sorted_edge(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::map<std::pair<int, int>, std::vector<int>> edge_incidence(const TriMesh& mesh) {
    std::map<std::pair<int, int>, std::vector<int>> edges;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) edges[sorted_edge(tri[k], tri[(k + 1) % 3])].push_back(t);
    }
    return edges;
}

std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh) {
    const auto edges = edge_incidence(mesh);
    // Boundary edges keep the direction induced by their only triangle.
    std::map<int, int> next;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k], b = tri[(k + 1) % 3];
            if (edges.at(sorted_edge(a, b)).size() == 1) {
                if (next.count(a))
                    throw std::runtime_error("boundary_loops: non-manifold boundary vertex " + std::to_string(a));
                next[a] = b;
            }
        }
    }
    std::vector<std::vector<int>> loops;
    std::map<int, bool> used;
    for (const auto& [start, _] : next) {
        if (used[start]) continue;
        std::vector<int> loop;
        int v = start;
        do {
            loop.push_back(v);
            used[v] = true;
            auto it = next.find(v);
            if (it == next.end()) throw std::runtime_error("boundary_loops: open boundary chain");
            v = it->second;
        } while (v != start && loop.size() <= next.size());
        if (v != start) throw std::runtime_error("boundary_loops: boundary chain does not close");
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh) {
    std::vector<std::vector<int>> nbr(mesh.vertex_count());
    for (const auto& tri : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            nbr[tri[k]].push_back(tri[(k + 1) % 3]);
            nbr[tri[k]].push_back(tri[(k + 2) % 3]);
        }
    }
    for (auto& v : nbr) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return nbr;
}

std::vector<std::vector<int>> vertex_triangles(const TriMesh& mesh) {
    std::vector<std::vector<int>> vt(mesh.vertex_count());
    for (int t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) vt[mesh.triangles[t][k]].push_back(t);
    return vt;
}

double triangle_area_euclidean(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

bool triangle_degenerate(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double area = triangle_area_euclidean(a, b, c);
    const double l2 = std::max({norm2(b - a), norm2(c - b), norm2(a - c)});
    return area < 1e-14 * l2;
}

void validate(const TriMesh& mesh) {
    const int nv = mesh.vertex_count();
    if (mesh.is_boundary.size() != mesh.positions.size())
        throw std::runtime_error("validate: boundary flag array size mismatch");
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= nv)
                throw std::runtime_error("validate: triangle " + std::to_string(t) + " index out of range");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0])
            throw std::runtime_error("validate: triangle " + std::to_string(t) + " repeats a vertex");
        if (triangle_degenerate(mesh.positions[tri[0]], mesh.positions[tri[1]], mesh.positions[tri[2]]))
            throw std::runtime_error("validate: triangle " + std::to_string(t) + " is degenerate");
    }

    const auto edges = edge_incidence(mesh);
    std::vector<std::uint8_t> on_boundary_edge(nv, 0);
    for (const auto& [edge, tris] : edges) {
        if (tris.size() > 2)
            throw std::runtime_error("validate: edge shared by more than two triangles");
        if (tris.size() == 1) {
            on_boundary_edge[edge.first] = 1;
            on_boundary_edge[edge.second] = 1;
        } else {
            // Opposite induced directions on the shared edge.
            int dir = 0;
            for (int t : tris) {
                const auto& tri = mesh.triangles[t];
                for (int k = 0; k < 3; ++k) {
                    if (tri[k] == edge.first && tri[(k + 1) % 3] == edge.second) dir += 1;
                    if (tri[k] == edge.second && tri[(k + 1) % 3] == edge.first) dir -= 1;
                }
            }
            if (dir != 0) throw std::runtime_error("validate: inconsistent winding across an interior edge");
        }
    }
    for (int v = 0; v < nv; ++v) {
        if (static_cast<bool>(mesh.is_boundary[v]) != static_cast<bool>(on_boundary_edge[v]))
            throw std::runtime_error("validate: boundary flag disagrees with topology at vertex " +
                                     std::to_string(v));
    }
    boundary_loops(mesh);  // throws when boundary edges fail to close
}

TriMesh subdivide(const TriMesh& mesh, const std::function<void(int, int, int)>& midpoint_hook) {
    TriMesh out;
    out.positions = mesh.positions;
    out.is_boundary = mesh.is_boundary;

    const auto edges = edge_incidence(mesh);
    std::map<std::pair<int, int>, int> midpoint;
    for (const auto& [edge, tris] : edges) {
        const int id = out.vertex_count();
        out.positions.push_back((mesh.positions[edge.first] + mesh.positions[edge.second]) * 0.5);
        out.is_boundary.push_back(tris.size() == 1 ? 1 : 0);
        midpoint[edge] = id;
        if (midpoint_hook) midpoint_hook(edge.first, edge.second, id);
    }

    out.triangles.reserve(mesh.triangles.size() * 4);
    for (const auto& tri : mesh.triangles) {
        const int a = tri[0], b = tri[1], c = tri[2];
        const int ab = midpoint.at(sorted_edge(a, b));
        const int bc = midpoint.at(sorted_edge(b, c));
        const int ca = midpoint.at(sorted_edge(c, a));
        out.triangles.push_back({a, ab, ca});
        out.triangles.push_back({b, bc, ab});
        out.triangles.push_back({c, ca, bc});
        out.triangles.push_back({ab, bc, ca});
    }
    return out;
}

EulerCharacteristic euler_characteristic(const TriMesh& mesh) {
    EulerCharacteristic ec;
    ec.vertices = mesh.vertex_count();
    ec.faces = mesh.triangle_count();
    const auto edges = edge_incidence(mesh);
    ec.edges = static_cast<int>(edges.size());
    ec.chi = ec.vertices - ec.edges + ec.faces;

    ec.oriented = true;
    for (const auto& [edge, tris] : edges) {
        if (tris.size() != 2) continue;
        int dir = 0;
        for (int t : tris) {
            const auto& tri = mesh.triangles[t];
            for (int k = 0; k < 3; ++k) {
                if (tri[k] == edge.first && tri[(k + 1) % 3] == edge.second) dir += 1;
                if (tri[k] == edge.second && tri[(k + 1) % 3] == edge.first) dir -= 1;
            }
        }
        if (dir != 0) ec.oriented = false;
    }

    UnionFind uf(ec.vertices);
    for (const auto& [edge, tris] : edges) uf.unite(edge.first, edge.second);
    int components = 0;
    for (int v = 0; v < ec.vertices; ++v)
        if (uf.find(v) == v) ++components;
    ec.connected = (components <= 1);

    ec.boundary_loop_count = static_cast<int>(boundary_loops(mesh).size());
    ec.genus = (2 - ec.chi - ec.boundary_loop_count) / 2;
    return ec;
}

WeldResult weld_meshes(const std::vector<TriMesh>& meshes, double tolerance) {
    if (tolerance < 0.0) throw std::invalid_argument("weld_meshes: negative tolerance");

    // Global vertex list with per-input offsets.
    std::vector<int> offset(meshes.size() + 1, 0);
    for (size_t i = 0; i < meshes.size(); ++i) offset[i + 1] = offset[i] + meshes[i].vertex_count();
    const int total = offset.back();
    std::vector<Vec3> points(total);
    for (size_t i = 0; i < meshes.size(); ++i)
        std::copy(meshes[i].positions.begin(), meshes[i].positions.end(),
                  points.begin() + offset[i]);

    // Single-link clustering on a uniform hash grid with cell = tolerance;
    // pairs up to one cell apart are candidates.
    UnionFind uf(total);
    if (tolerance > 0.0 && total > 0) {
        const double cell = tolerance;
        auto key = [&](const Vec3& p) {
            const auto q = [&](double x) {
                return static_cast<long long>(std::floor(x / cell));
            };
            return std::array<long long, 3>{q(p.x), q(p.y), q(p.z)};
        };
        std::map<std::array<long long, 3>, std::vector<int>> grid;
        for (int v = 0; v < total; ++v) grid[key(points[v])].push_back(v);
        const double tol2 = tolerance * tolerance;
        for (int v = 0; v < total; ++v) {
            const auto base = key(points[v]);
            for (long long dz = -1; dz <= 1; ++dz)
                for (long long dy = -1; dy <= 1; ++dy)
                    for (long long dx = -1; dx <= 1; ++dx) {
                        auto it = grid.find({base[0] + dx, base[1] + dy, base[2] + dz});
                        if (it == grid.end()) continue;
                        for (int w : it->second)
                            if (w > v && norm2(points[w] - points[v]) <= tol2) uf.unite(v, w);
                    }
        }
    }

    // Cluster representative = lowest original id; keeps its position.
    std::vector<int> lowest(total, -1);
    for (int v = 0; v < total; ++v) {
        const int root = uf.find(v);
        if (lowest[root] < 0 || v < lowest[root]) lowest[root] = v;
    }
    std::vector<int> welded_id(total, -1);
    WeldResult out;
    for (int v = 0; v < total; ++v) {
        const int rep = lowest[uf.find(v)];
        if (welded_id[rep] < 0) {
            welded_id[rep] = static_cast<int>(out.mesh.positions.size());
            out.mesh.positions.push_back(points[rep]);
        }
        welded_id[v] = welded_id[rep];
    }

    out.vertex_map.resize(meshes.size());
    for (size_t i = 0; i < meshes.size(); ++i) {
        out.vertex_map[i].resize(meshes[i].vertex_count());
        for (int v = 0; v < meshes[i].vertex_count(); ++v)
            out.vertex_map[i][v] = welded_id[offset[i] + v];
    }

    for (size_t i = 0; i < meshes.size(); ++i)
        for (size_t j = 0; j < meshes[i].triangles.size(); ++j) {
            const auto& tri = meshes[i].triangles[j];
            const std::array<int, 3> mapped = {out.vertex_map[i][tri[0]],
                                               out.vertex_map[i][tri[1]],
                                               out.vertex_map[i][tri[2]]};
            if (mapped[0] == mapped[1] || mapped[1] == mapped[2] || mapped[2] == mapped[0])
                continue;  // collapsed by the weld
            out.mesh.triangles.push_back(mapped);
            out.triangle_source.push_back(static_cast<int>(i));
            out.triangle_index.push_back(static_cast<int>(j));
        }

    out.mesh.is_boundary.assign(out.mesh.positions.size(), 0);
    for (const auto& [edge, tris] : edge_incidence(out.mesh))
        if (tris.size() == 1) {
            out.mesh.is_boundary[edge.first] = 1;
            out.mesh.is_boundary[edge.second] = 1;
        }
    return out;
}

}  // namespace schwarz
