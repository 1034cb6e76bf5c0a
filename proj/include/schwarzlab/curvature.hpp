#pragma once

// Discrete curvature measurements on conformal-metric surfaces: vertex mean
// curvature from the Euclidean area gradient (transformed pointwise to H_g),
// principal curvatures from local quadric fits (transformed to the g shape
// operator), and Gaussian curvature from g-edge-length angle defects.

#include <vector>

#include "schwarzlab/quadrature.hpp"
#include "schwarzlab/trimesh.hpp"

namespace schwarz {

// Area-weighted average of incident triangle normals, normalized; zero for
// isolated vertices.
std::vector<Vec3> vertex_normals(const TriMesh& mesh);

// Per-vertex Euclidean mean curvature -(grad_v A_euc).nu / (star/3) (a
// sphere with outward normals reads -2/r); zero on boundary and isolated
// vertices.
std::vector<double> euclidean_mean_curvature(const TriMesh& mesh);

// Euclidean |A| = sqrt(k1^2 + k2^2) at one vertex from the 2-ring quadric
// fit; false when the neighborhood leaves the fit under-determined.
bool quadric_second_form_euclidean(const TriMesh& mesh, int vertex, double& a_norm);

struct MeanCurvatureStats {
    double sup = 0.0;  // sup over counted vertices of |H_g|
    double l2 = 0.0;   // sqrt( sum H_g^2 * (g-star-area/3) ): L^2(dA_g) norm
    std::vector<double> h_g;           // per vertex; 0 where not counted
    std::vector<std::uint8_t> counted;  // interior vertices only
};

// Vertex Euclidean mean curvature h_euc = -(grad_v A_euc).nu / (star/3)
// (so a sphere with outward normals reads -2/r), transformed to
// H_g = (h_euc - 2 d_nu u)/s^2.  Boundary vertices are excluded.
MeanCurvatureStats mean_curvature_residual(double m, const TriMesh& mesh);

struct ShapeOperatorSample {
    int vertex = -1;
    double kappa_euc[2] = {0.0, 0.0};  // Euclidean principal curvatures
    double kappa_g[2] = {0.0, 0.0};    // kappa_g = (kappa - d_nu u)/s^2
    double a_norm_euc = 0.0;           // sqrt(k1^2 + k2^2)
    double a_norm_g = 0.0;             // |A^M|_g
    Vec3 normal;                       // Euclidean unit vertex normal
};

// Quadric least-squares fit over the 2-ring of every interior vertex
// (z = a0 + a1 x + a2 y + quadratic terms in the tangent frame of the
// vertex normal), with the first-fundamental-form correction.  Vertices
// whose neighborhoods leave the fit under-determined are skipped.
std::vector<ShapeOperatorSample> second_form_norm(double m, const TriMesh& mesh);

// max over fitted interior vertices of
// |A^M|_g * min(1, Euclidean distance to the boundary polyline).
// Vertices inside the contact band of a totally geodesic face (within
// contact_band * horizon_radius of the horizon sphere or the equatorial
// plane) are excluded: where the surface rests on an obstacle face the
// piecewise linear parametrization degenerates and the quadric fit
// reports mesh noise, not curvature.
double curvature_sup_product(double m, const TriMesh& mesh, double contact_band = 0.01);

struct TotalCurvature {
    double signed_sum = 0.0;  // sum of angle defects: discrete \int K dA_g
    double abs_sum = 0.0;     // sum of |defect|:        discrete \int|K| dA_g
    std::vector<double> defect;  // per vertex; 0 on boundary
};

// Angle defects 2 pi - sum(corner angles) at interior vertices, with corner
// angles from g-edge-lengths via the law of cosines.
TotalCurvature total_curvature_g(double m, const TriMesh& mesh, QuadratureRule rule);

}  // namespace schwarz
