#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "schwarzlab/vec3.hpp"

namespace schwarz {

// Indexed triangle mesh.  Triangles are counterclockwise with respect to
// the surface normal they define; boundary flags are maintained alongside
// and must agree with the edge topology (validate()).
struct TriMesh {
    std::vector<Vec3> positions;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::uint8_t> is_boundary;  // per vertex

    int vertex_count() const { return static_cast<int>(positions.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
};

// Undirected edge -> incident triangles (1 = boundary edge, 2 = interior).
std::map<std::pair<int, int>, std::vector<int>> edge_incidence(const TriMesh& mesh);

// Closed boundary loops as ordered vertex cycles.
std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh);

// One-ring vertex neighborhoods (unordered, deduplicated).
std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh);

// Triangles incident to each vertex.
std::vector<std::vector<int>> vertex_triangles(const TriMesh& mesh);

// Euclidean triangle area.
double triangle_area_euclidean(const Vec3& a, const Vec3& b, const Vec3& c);

// A triangle is degenerate when its area falls below
// 1e-14 * (longest edge)^2.
bool triangle_degenerate(const Vec3& a, const Vec3& b, const Vec3& c);

// Structural validation: indices in range, every edge shared by at most two
// triangles with opposite induced directions, boundary flags matching edge
// topology, boundary edges chaining into closed loops, no degenerate
// triangles.  Throws std::runtime_error describing the first failure.
void validate(const TriMesh& mesh);

// Midpoint 1->4 subdivision.  midpoint_index receives the two parent vertex
// ids and the midpoint id, so callers can track boundary parameters; may be
// nullptr.  New vertices are boundary iff the parent edge was a boundary
// edge.
TriMesh subdivide(const TriMesh& mesh,
                  const std::function<void(int, int, int)>& midpoint_hook = nullptr);

struct EulerCharacteristic {
    int vertices = 0;
    int edges = 0;
    int faces = 0;
    int chi = 0;
    int boundary_loop_count = 0;
    int genus = 0;  // (2 - chi - boundary loops) / 2
    bool connected = false;
    bool oriented = false;  // every interior edge consistently wound
};

EulerCharacteristic euler_characteristic(const TriMesh& mesh);

struct WeldResult {
    TriMesh mesh;
    // vertex_map[i][v] = welded id of vertex v of input mesh i.
    std::vector<std::vector<int>> vertex_map;
    // Input mesh owning each output triangle (inputs appear in order) and
    // the triangle's index inside that input.
    std::vector<int> triangle_source;
    std::vector<int> triangle_index;
};

// Concatenate the input meshes, merging vertices closer than `tolerance`
// (single-link clustering; each cluster keeps the position of its lowest
// original vertex).  Triangles collapsing onto fewer than three distinct
// vertices are dropped.  Boundary flags are recomputed from the welded edge
// topology.
WeldResult weld_meshes(const std::vector<TriMesh>& meshes, double tolerance);

}  // namespace schwarz
