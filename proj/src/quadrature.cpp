#include "schwarzlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "schwarzlab/metric.hpp"

namespace schwarz {

namespace {

// Distance from the origin to the segment [p, q].
double segment_origin_distance(const Vec3& p, const Vec3& q) {
    const Vec3 d = q - p;
    const double l2 = norm2(d);
    if (l2 == 0.0) return norm(p);
    const double t = std::clamp(-dot(p, d) / l2, 0.0, 1.0);
    return norm(p + d * t);
}

struct TriangleQuadPoint {
    double wa, wb, wc;  // barycentric weights of the evaluation point
    double w;           // quadrature weight
};

// Evaluation points for the two rules.  n = number of points.
int triangle_rule(QuadratureRule rule, TriangleQuadPoint out[3]) {
    if (rule == QuadratureRule::Centroid) {
        out[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0};
        return 1;
    }
    out[0] = {0.5, 0.5, 0.0, 1.0 / 3.0};
    out[1] = {0.0, 0.5, 0.5, 1.0 / 3.0};
    out[2] = {0.5, 0.0, 0.5, 1.0 / 3.0};
    return 3;
}

// Conformal weight sum W = sum_k w_k * Phi(p_k) for one triangle.
double conformal_weight(double m, const Vec3& a, const Vec3& b, const Vec3& c, QuadratureRule rule) {
    TriangleQuadPoint q[3];
    const int n = triangle_rule(rule, q);
    double w = 0.0;
    for (int k = 0; k < n; ++k) {
        const Vec3 p = a * q[k].wa + b * q[k].wb + c * q[k].wc;
        w += q[k].w * conformal_factor(m, p);
    }
    return w;
}

// d(A_euc)/d(a) for triangle (a, b, c): (1/2) n_hat x (c - b).
Vec3 euclidean_area_gradient_a(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 n = cross(b - a, c - a);
    const double ln = norm(n);
    if (ln == 0.0) return {0, 0, 0};
    return cross(n / ln, c - b) * 0.5;
}

// Per-triangle contribution to the gradient of A_euc * W at each corner.
void triangle_gradient_g(double m, const Vec3& a, const Vec3& b, const Vec3& c, QuadratureRule rule,
                         Vec3& ga, Vec3& gb, Vec3& gc) {
    const double area = triangle_area_euclidean(a, b, c);
    TriangleQuadPoint q[3];
    const int n = triangle_rule(rule, q);

    double w = 0.0;
    Vec3 grad_w_a{}, grad_w_b{}, grad_w_c{};
    for (int k = 0; k < n; ++k) {
        const Vec3 p = a * q[k].wa + b * q[k].wb + c * q[k].wc;
        w += q[k].w * conformal_factor(m, p);
        const Vec3 dphi = conformal_factor_gradient(m, p) * q[k].w;
        grad_w_a += dphi * q[k].wa;
        grad_w_b += dphi * q[k].wb;
        grad_w_c += dphi * q[k].wc;
    }
    ga = euclidean_area_gradient_a(a, b, c) * w + grad_w_a * area;
    gb = euclidean_area_gradient_a(b, c, a) * w + grad_w_b * area;
    gc = euclidean_area_gradient_a(c, a, b) * w + grad_w_c * area;
}

}  // namespace

double edge_length_g(double m, const Vec3& p, const Vec3& q, QuadratureRule rule) {
    if (segment_origin_distance(p, q) < 1e-12)
        throw std::domain_error("edge_length_g: segment passes through the excluded origin");
    const double len = norm(q - p);
    if (rule == QuadratureRule::Centroid) return len * conformal_scale(m, (p + q) * 0.5);
    // Simpson.
    const double s0 = conformal_scale(m, p);
    const double s1 = conformal_scale(m, (p + q) * 0.5);
    const double s2 = conformal_scale(m, q);
    return len * (s0 + 4.0 * s1 + s2) / 6.0;
}

double triangle_area_g(double m, const Vec3& a, const Vec3& b, const Vec3& c, QuadratureRule rule) {
    return triangle_area_euclidean(a, b, c) * conformal_weight(m, a, b, c, rule);
}

void triangle_areas_g(double m, const TriMesh& mesh, QuadratureRule rule, std::vector<double>& areas) {
    const int nt = mesh.triangle_count();
    areas.resize(nt);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        areas[t] = triangle_area_g(m, mesh.positions[tri[0]], mesh.positions[tri[1]],
                                   mesh.positions[tri[2]], rule);
    }
}

double mesh_area_g(double m, const TriMesh& mesh, QuadratureRule rule) {
    std::vector<double> areas;
    triangle_areas_g(m, mesh, rule, areas);
    double total = 0.0;
    for (double a : areas) total += a;  // fixed order: deterministic
    return total;
}

std::vector<Vec3> area_gradient_g(double m, const TriMesh& mesh, QuadratureRule rule) {
    const int nt = mesh.triangle_count();
    std::vector<std::array<Vec3, 3>> scatter(nt);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        triangle_gradient_g(m, mesh.positions[tri[0]], mesh.positions[tri[1]], mesh.positions[tri[2]],
                            rule, scatter[t][0], scatter[t][1], scatter[t][2]);
    }
    std::vector<Vec3> grad(mesh.vertex_count());
    for (int t = 0; t < nt; ++t) {  // fixed order: deterministic
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) grad[tri[k]] += scatter[t][k];
    }
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.is_boundary[v]) grad[v] = {0, 0, 0};
    return grad;
}

namespace serial {

double mesh_area_g(double m, const TriMesh& mesh, QuadratureRule rule) {
    double total = 0.0;
    for (const auto& tri : mesh.triangles)
        total += triangle_area_g(m, mesh.positions[tri[0]], mesh.positions[tri[1]],
                                 mesh.positions[tri[2]], rule);
    return total;
}

std::vector<Vec3> area_gradient_g(double m, const TriMesh& mesh, QuadratureRule rule) {
    std::vector<Vec3> grad(mesh.vertex_count());
    for (const auto& tri : mesh.triangles) {
        Vec3 ga, gb, gc;
        triangle_gradient_g(m, mesh.positions[tri[0]], mesh.positions[tri[1]], mesh.positions[tri[2]],
                            rule, ga, gb, gc);
        grad[tri[0]] += ga;
        grad[tri[1]] += gb;
        grad[tri[2]] += gc;
    }
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.is_boundary[v]) grad[v] = {0, 0, 0};
    return grad;
}

}  // namespace serial

}  // namespace schwarz
