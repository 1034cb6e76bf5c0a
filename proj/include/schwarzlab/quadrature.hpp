#pragma once

// Conformal length/area quadrature.  Euclidean elements are multiplied by
// powers of s(x) = 1 + m/(2|x|): s^2 on lengths, s^4 on areas.
//
// Rule mapping:
//   Centroid        triangles: 1-point centroid (degree 1)
//                   edges:     midpoint rule (degree 1)
//   EdgeMidpoints3  triangles: 3 edge midpoints, weights 1/3 (degree 2)
//                   edges:     Simpson at {0, 1/2, 1} (degree 3)

#include <vector>

#include "schwarzlab/trimesh.hpp"
#include "schwarzlab/vec3.hpp"

namespace schwarz {

enum class QuadratureRule { Centroid, EdgeMidpoints3 };

// g-length of the straight segment [p, q].  Throws std::domain_error when
// the segment passes within 1e-12 of the origin.
double edge_length_g(double m, const Vec3& p, const Vec3& q, QuadratureRule rule);

// g-area of the Euclidean triangle (a, b, c).
double triangle_area_g(double m, const Vec3& a, const Vec3& b, const Vec3& c, QuadratureRule rule);

// Total g-area.  OpenMP-parallel over triangles with a fixed-order serial
// reduction: results are bitwise identical for any thread count and match
// serial::mesh_area_g exactly.
double mesh_area_g(double m, const TriMesh& mesh, QuadratureRule rule);

// Per-triangle g-areas into a caller-provided buffer (resized); used by the
// solver's incremental line search.  Parallel, deterministic.
void triangle_areas_g(double m, const TriMesh& mesh, QuadratureRule rule, std::vector<double>& areas);

// Exact derivative of mesh_area_g with respect to vertex positions.
// Boundary vertices receive zero.  Parallel with per-triangle scatter
// buffers and fixed-order accumulation; bitwise deterministic.
std::vector<Vec3> area_gradient_g(double m, const TriMesh& mesh, QuadratureRule rule);

// Straightforward single-threaded implementations kept as the reference the
// parallel kernels are tested (bitwise) against.
namespace serial {
double mesh_area_g(double m, const TriMesh& mesh, QuadratureRule rule);
std::vector<Vec3> area_gradient_g(double m, const TriMesh& mesh, QuadratureRule rule);
}  // namespace serial

}  // namespace schwarz
