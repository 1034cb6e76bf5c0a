#include "schwarzlab/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "schwarzlab/metric.hpp"

namespace schwarz {

namespace {

// Euclidean total-area gradient and barycentric star areas, serial fixed
// order (diagnostics are read-only and cheap next to the solver).
void euclidean_area_gradient(const TriMesh& mesh, std::vector<Vec3>& grad,
                             std::vector<double>& star) {
    grad.assign(mesh.positions.size(), Vec3{0.0, 0.0, 0.0});
    star.assign(mesh.positions.size(), 0.0);
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.positions[tri[0]];
        const Vec3& b = mesh.positions[tri[1]];
        const Vec3& c = mesh.positions[tri[2]];
        const Vec3 n = cross(b - a, c - a);
        const double area = 0.5 * norm(n);
        if (!(area > 0.0)) continue;
        const Vec3 nh = n * (1.0 / (2.0 * area));
        grad[tri[0]] += cross(nh, c - b) * 0.5;
        grad[tri[1]] += cross(nh, a - c) * 0.5;
        grad[tri[2]] += cross(nh, b - a) * 0.5;
        for (int k = 0; k < 3; ++k) star[tri[k]] += area / 3.0;
    }
}

// Principal curvatures at v from the quadric least-squares fit over its
// 2-ring in the tangent frame of `normal`; false when under-determined or
// ill-posed.  The fit runs on coordinates scaled by the ring extent, so the
// condition number measures ring shape, not ring size: a healthy 2-ring
// sits around 10-50, while a crumpled or partially collapsed ring (the
// parametrization degenerates where the surface presses a totally geodesic
// face) blows past the rejection threshold and the vertex reports no fit
// instead of a kink-sized artifact.
bool fit_principal_curvatures(const TriMesh& mesh, const std::vector<std::vector<int>>& neighbors,
                              int v, const Vec3& n, double kappa[2]) {
    std::set<int> ring(neighbors[v].begin(), neighbors[v].end());
    for (int w : neighbors[v]) ring.insert(neighbors[w].begin(), neighbors[w].end());
    ring.erase(v);
    if (ring.size() < 6) return false;

    // Tangent frame: e1 from the coordinate axis least aligned with n.
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    Vec3 seed{1.0, 0.0, 0.0};
    if (ay <= ax && ay <= az) seed = Vec3{0.0, 1.0, 0.0};
    if (az <= ax && az < ay) seed = Vec3{0.0, 0.0, 1.0};
    const Vec3 e1 = normalized(seed - n * dot(n, seed));
    const Vec3 e2 = cross(n, e1);

    double extent = 0.0;
    for (int w : ring) extent = std::max(extent, norm(mesh.positions[w] - mesh.positions[v]));
    if (!(extent > 0.0)) return false;

    Eigen::MatrixXd A(static_cast<int>(ring.size()), 6);
    Eigen::VectorXd rhs(static_cast<int>(ring.size()));
    int row = 0;
    for (int w : ring) {
        const Vec3 d = (mesh.positions[w] - mesh.positions[v]) * (1.0 / extent);
        const double x = dot(d, e1), y = dot(d, e2), z = dot(d, n);
        A(row, 0) = 1.0;
        A(row, 1) = x;
        A(row, 2) = y;
        A(row, 3) = 0.5 * x * x;
        A(row, 4) = x * y;
        A(row, 5) = 0.5 * y * y;
        rhs(row) = z;
        ++row;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues()(5);
    if (!(smin > 0.0) || svd.singularValues()(0) / smin > 1e6) return false;
    const Eigen::VectorXd sol = svd.solve(rhs);
    if (!sol.allFinite()) return false;
    const double hx = sol(1), hy = sol(2);
    const double hxx = sol(3) / extent, hxy = sol(4) / extent, hyy = sol(5) / extent;

    // Shape operator S = I^{-1} II of the graph z = h(x,y).
    const double w2 = 1.0 + hx * hx + hy * hy;
    const double wr = std::sqrt(w2);
    const double i11 = 1.0 + hx * hx, i12 = hx * hy, i22 = 1.0 + hy * hy;
    const double det_i = i11 * i22 - i12 * i12;
    const double ii11 = hxx / wr, ii12 = hxy / wr, ii22 = hyy / wr;
    const double s11 = (i22 * ii11 - i12 * ii12) / det_i;
    const double s12 = (i22 * ii12 - i12 * ii22) / det_i;
    const double s21 = (i11 * ii12 - i12 * ii11) / det_i;
    const double s22 = (i11 * ii22 - i12 * ii12) / det_i;
    const double tr = s11 + s22;
    const double dt = s11 * s22 - s12 * s21;
    const double disc = std::max(0.0, tr * tr - 4.0 * dt);
    const double root = std::sqrt(disc);
    kappa[0] = 0.5 * (tr - root);
    kappa[1] = 0.5 * (tr + root);
    return true;
}

}  // namespace

std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
    std::vector<Vec3> normals(mesh.positions.size(), Vec3{0.0, 0.0, 0.0});
    for (const auto& tri : mesh.triangles) {
        const Vec3 n = cross(mesh.positions[tri[1]] - mesh.positions[tri[0]],
                             mesh.positions[tri[2]] - mesh.positions[tri[0]]);
        for (int k = 0; k < 3; ++k) normals[tri[k]] += n;  // |n| = 2 area
    }
    for (Vec3& n : normals) {
        const double len = norm(n);
        if (len > 0.0) n = n * (1.0 / len);
    }
    return normals;
}

std::vector<double> euclidean_mean_curvature(const TriMesh& mesh) {
    std::vector<Vec3> grad;
    std::vector<double> star;
    euclidean_area_gradient(mesh, grad, star);
    const std::vector<Vec3> normals = vertex_normals(mesh);
    std::vector<double> h(mesh.positions.size(), 0.0);
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (!mesh.is_boundary[v] && star[v] > 0.0) h[v] = -dot(grad[v], normals[v]) / star[v];
    return h;
}

bool quadric_second_form_euclidean(const TriMesh& mesh, int vertex, double& a_norm) {
    const std::vector<Vec3> normals = vertex_normals(mesh);
    if (norm(normals[vertex]) == 0.0) return false;
    const auto neighbors = vertex_neighbors(mesh);
    double kappa[2];
    if (!fit_principal_curvatures(mesh, neighbors, vertex, normals[vertex], kappa)) return false;
    a_norm = std::hypot(kappa[0], kappa[1]);
    return true;
}

MeanCurvatureStats mean_curvature_residual(double m, const TriMesh& mesh) {
    MeanCurvatureStats stats;
    stats.h_g.assign(mesh.positions.size(), 0.0);
    stats.counted.assign(mesh.positions.size(), 0);

    std::vector<Vec3> grad;
    std::vector<double> star;
    euclidean_area_gradient(mesh, grad, star);
    const std::vector<Vec3> normals = vertex_normals(mesh);

    std::vector<double> areas_g;
    triangle_areas_g(m, mesh, QuadratureRule::EdgeMidpoints3, areas_g);
    std::vector<double> star_g(mesh.positions.size(), 0.0);
    for (int t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) star_g[mesh.triangles[t][k]] += areas_g[t] / 3.0;

    double l2sq = 0.0;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.is_boundary[v] || star[v] <= 0.0) continue;
        const double h_euc = -dot(grad[v], normals[v]) / star[v];
        const double hg = mean_curvature_conformal(m, mesh.positions[v], normals[v], h_euc);
        stats.h_g[v] = hg;
        stats.counted[v] = 1;
        stats.sup = std::max(stats.sup, std::abs(hg));
        l2sq += hg * hg * star_g[v];
    }
    stats.l2 = std::sqrt(l2sq);
    return stats;
}

std::vector<ShapeOperatorSample> second_form_norm(double m, const TriMesh& mesh) {
    const std::vector<Vec3> normals = vertex_normals(mesh);
    const auto neighbors = vertex_neighbors(mesh);
    std::vector<ShapeOperatorSample> samples;

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.is_boundary[v]) continue;
        const Vec3 n = normals[v];
        if (norm(n) == 0.0) continue;
        double kappa[2];
        if (!fit_principal_curvatures(mesh, neighbors, v, n, kappa)) continue;

        ShapeOperatorSample smp;
        smp.vertex = v;
        smp.normal = n;
        smp.kappa_euc[0] = kappa[0];
        smp.kappa_euc[1] = kappa[1];
        const double dnu = conformal_exponent_normal_derivative(m, mesh.positions[v], n);
        const double s2 = conformal_scale(m, mesh.positions[v]);
        smp.kappa_g[0] = (smp.kappa_euc[0] - dnu) / s2;
        smp.kappa_g[1] = (smp.kappa_euc[1] - dnu) / s2;
        smp.a_norm_euc = std::hypot(smp.kappa_euc[0], smp.kappa_euc[1]);
        smp.a_norm_g = std::hypot(smp.kappa_g[0], smp.kappa_g[1]);
        samples.push_back(smp);
    }
    return samples;
}

double curvature_sup_product(double m, const TriMesh& mesh, double contact_band) {
    std::vector<std::pair<int, int>> boundary_edges;
    for (const auto& [edge, tris] : edge_incidence(mesh))
        if (tris.size() == 1) boundary_edges.push_back(edge);

    auto boundary_distance = [&](const Vec3& p) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : boundary_edges) {
            const Vec3& pa = mesh.positions[a];
            const Vec3 d = mesh.positions[b] - pa;
            const double len2 = norm2(d);
            const double t = len2 > 0.0 ? std::clamp(dot(p - pa, d) / len2, 0.0, 1.0) : 0.0;
            best = std::min(best, norm(p - (pa + d * t)));
        }
        return best;
    };

    const double rh = horizon_radius(m);
    double sup = 0.0;
    for (const ShapeOperatorSample& smp : second_form_norm(m, mesh)) {
        const Vec3& p = mesh.positions[smp.vertex];
        // Skip the contact band of the obstacle faces (see header).
        if (norm(p) <= rh * (1.0 + contact_band) || std::abs(p.z) <= contact_band * rh) continue;
        const double d = boundary_edges.empty() ? 1.0 : boundary_distance(p);
        sup = std::max(sup, smp.a_norm_g * std::min(1.0, d));
    }
    return sup;
}

TotalCurvature total_curvature_g(double m, const TriMesh& mesh, QuadratureRule rule) {
    TotalCurvature tc;
    tc.defect.assign(mesh.positions.size(), 0.0);
    std::vector<double> angle_sum(mesh.positions.size(), 0.0);

    for (const auto& tri : mesh.triangles) {
        double len[3];  // len[k] = g-length of the edge opposite vertex k
        for (int k = 0; k < 3; ++k)
            len[k] = edge_length_g(m, mesh.positions[tri[(k + 1) % 3]],
                                   mesh.positions[tri[(k + 2) % 3]], rule);
        for (int k = 0; k < 3; ++k) {
            const double a = len[(k + 1) % 3], b = len[(k + 2) % 3], c = len[k];
            if (c > a + b)
                throw std::runtime_error("total_curvature_g: g-lengths break the triangle inequality");
            const double cosv = std::clamp((a * a + b * b - c * c) / (2.0 * a * b), -1.0, 1.0);
            angle_sum[tri[k]] += std::acos(cosv);
        }
    }
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.is_boundary[v] || angle_sum[v] == 0.0) continue;
        const double d = kTwoPi - angle_sum[v];
        tc.defect[v] = d;
        tc.signed_sum += d;
        tc.abs_sum += std::abs(d);
    }
    return tc;
}

}  // namespace schwarz
