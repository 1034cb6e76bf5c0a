#include "schwarzlab/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "schwarzlab/curvature.hpp"
#include "schwarzlab/metric.hpp"
#include "schwarzlab/quadrature.hpp"
#include "schwarzlab/spatial.hpp"

namespace schwarz {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.618033988749895;  // keeps samples off grid lines

std::string point_string(const Vec3& p) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "(%.6g, %.6g, %.6g)", p.x, p.y, p.z);
    return buf;
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    double sum = f(a) + f(b);
    const double h = (b - a) / panels;
    for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Intersection segments of the mesh with the vertical half-plane at the
// given azimuth.
std::vector<std::pair<Vec3, Vec3>> halfplane_slice(const TriMesh& mesh, double alpha) {
    const Vec3 n{-std::sin(alpha), std::cos(alpha), 0.0};
    const Vec3 dir{std::cos(alpha), std::sin(alpha), 0.0};
    std::vector<std::pair<Vec3, Vec3>> segs;
    for (const auto& tri : mesh.triangles) {
        const Vec3* p[3] = {&mesh.positions[tri[0]], &mesh.positions[tri[1]],
                            &mesh.positions[tri[2]]};
        double d[3];
        for (int i = 0; i < 3; ++i) {
            d[i] = dot(n, *p[i]);
            if (d[i] == 0.0) d[i] = 1e-300;
        }
        Vec3 pts[2];
        int count = 0;
        for (int i = 0; i < 3 && count < 2; ++i) {
            const int j = (i + 1) % 3;
            if (d[i] * d[j] < 0.0) {
                const double t = d[i] / (d[i] - d[j]);
                pts[count++] = *p[i] + (*p[j] - *p[i]) * t;
            }
        }
        if (count == 2 && dot(dir, (pts[0] + pts[1]) * 0.5) > 0.0) segs.emplace_back(pts[0], pts[1]);
    }
    return segs;
}

// Crossings of the slice curve with the sphere |x| = r; the first crossing
// point is written to `point`.
int radius_crossings(const std::vector<std::pair<Vec3, Vec3>>& segs, double r, Vec3& point) {
    int count = 0;
    for (const auto& [a, b] : segs) {
        const double ra = norm(a), rb = norm(b);
        if ((ra - r) * (rb - r) < 0.0) {
            if (count == 0) point = a + (b - a) * ((r - ra) / (rb - ra));
            ++count;
        }
    }
    return count;
}

double clip_area_recursive(double m, const Vec3& a, const Vec3& b, const Vec3& c, int depth,
                           const std::function<bool(const Vec3&)>& contains) {
    const bool ia = contains(a), ib = contains(b), ic = contains(c);
    if (ia && ib && ic) return triangle_area_g(m, a, b, c, QuadratureRule::EdgeMidpoints3);
    if (depth == 0)
        return contains((a + b + c) * (1.0 / 3.0))
                   ? triangle_area_g(m, a, b, c, QuadratureRule::EdgeMidpoints3)
                   : 0.0;
    const Vec3 ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
    return clip_area_recursive(m, a, ab, ca, depth - 1, contains) +
           clip_area_recursive(m, ab, b, bc, depth - 1, contains) +
           clip_area_recursive(m, ca, bc, c, depth - 1, contains) +
           clip_area_recursive(m, ab, bc, ca, depth - 1, contains);
}

}  // namespace

ContainmentReport containment_check(const TriMesh& mesh, double theta, double m) {
    if (!(theta > 0.0 && theta <= kPi)) throw std::invalid_argument("containment_check: bad theta");
    if (!(m > 0.0)) throw std::invalid_argument("containment_check: bad mass");
    ContainmentReport rep;
    rep.worst = -kInf;
    const Vec3 n_qtheta{-std::sin(theta), std::cos(theta), 0.0};
    const double rh = horizon_radius(m);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.is_boundary[v]) continue;
        const Vec3& p = mesh.positions[v];
        const double viol[4] = {-p.y, dot(n_qtheta, p), -p.z, rh - norm(p)};
        for (int face = 0; face < 4; ++face)
            if (viol[face] > rep.worst) {
                rep.worst = viol[face];
                rep.worst_point = p;
                rep.worst_face = face;
            }
    }
    if (rep.worst_face < 0) rep.worst = 0.0;  // no interior vertices
    return rep;
}

MonotonicityReport monotonicity_pair(const TriMesh& inner, const TriMesh& outer, double theta,
                                     double m, double contact_band) {
    MonotonicityReport rep;
    rep.min_separation_g = kInf;
    if (inner.vertex_count() == outer.vertex_count() &&
        inner.triangle_count() == outer.triangle_count()) {
        double diff = 0.0;
        for (int v = 0; v < inner.vertex_count(); ++v)
            diff = std::max(diff, norm(inner.positions[v] - outer.positions[v]));
        if (diff == 0.0) {
            rep.applicable = false;
            rep.min_separation_g = 0.0;
            rep.detail = "identical meshes";
            return rep;
        }
    }

    auto boundary_touching = [](const TriMesh& msh) {
        return std::function<bool(int)>([&msh](int t) {
            const auto& tri = msh.triangles[t];
            return msh.is_boundary[tri[0]] || msh.is_boundary[tri[1]] || msh.is_boundary[tri[2]];
        });
    };
    // Where both surfaces rest on the same totally geodesic face (horizon sphere or
    // equatorial plane) the continuum gap is below discretization scale, so piecewise
    // linear sheets there overlap by parametrization noise rather than by geometry.
    // Crossings whose segment lies inside that contact band are tallied separately
    // and do not count against intersection_free.
    const double rh = horizon_radius(m);
    const auto in_contact_band = [&](const Vec3& p) {
        return norm(p) <= rh * (1.0 + contact_band) || std::abs(p.z) <= contact_band * rh;
    };
    const auto hits = cross_intersections(inner, outer, boundary_touching(inner),
                                          boundary_touching(outer), 100000);
    for (const IntersectionHit& hit : hits) {
        if (in_contact_band(hit.seg_a) && in_contact_band(hit.seg_b)) {
            ++rep.contact_crossings;
        } else {
            ++rep.crossings;
            if (rep.detail.empty())
                rep.detail = "interior crossing near " + point_string(hit.seg_a);
        }
    }
    rep.intersection_free = rep.crossings == 0;
    double r1 = 0.0;
    for (const Vec3& p : inner.positions) r1 = std::max(r1, norm(p));
    const int n_az = 12, n_r = 12;
    const double r_lo = rh + 0.05 * (r1 - rh), r_hi = rh + 0.95 * (r1 - rh);
    int pos = 0, neg = 0;
    for (int j = 0; j < n_az; ++j) {
        const double alpha = theta * (j + kGolden) / n_az;
        const auto segs_in = halfplane_slice(inner, alpha);
        const auto segs_out = halfplane_slice(outer, alpha);
        for (int k = 0; k < n_r; ++k) {
            const double r = r_lo + (r_hi - r_lo) * (k + kGolden) / n_r;
            Vec3 p_in, p_out;
            if (radius_crossings(segs_in, r, p_in) != 1) continue;
            if (radius_crossings(segs_out, r, p_out) != 1) continue;
            const double beta_in = std::atan2(std::hypot(p_in.x, p_in.y), p_in.z);
            const double beta_out = std::atan2(std::hypot(p_out.x, p_out.y), p_out.z);
            const double d = beta_out - beta_in;
            if (d > 1e-12) ++pos;
            if (d < -1e-12) ++neg;
            rep.min_separation_g = std::min(
                rep.min_separation_g, conformal_scale(m, (p_in + p_out) * 0.5) * norm(p_out - p_in));
            ++rep.samples;
        }
    }
    rep.one_sided = !(pos > 0 && neg > 0);
    rep.ordering_direction = pos > 0 ? (neg > 0 ? 0 : 1) : (neg > 0 ? -1 : 0);
    if (!rep.one_sided && rep.detail.empty())
        rep.detail = "polar ordering changes sign across samples";
    if (rep.samples == 0) {
        rep.min_separation_g = 0.0;
        if (rep.detail.empty()) rep.detail = "no matched samples in the overlap";
    }
    return rep;
}

MonotonicityReport monotonicity_check(const std::vector<TriMesh>& sweep, double theta, double m,
                                      double contact_band) {
    if (sweep.size() < 2)
        throw std::invalid_argument("monotonicity_check: need at least two meshes");
    MonotonicityReport agg;
    agg.min_separation_g = kInf;
    bool any_applicable = false;
    for (size_t i = 0; i + 1 < sweep.size(); ++i) {
        const MonotonicityReport r =
            monotonicity_pair(sweep[i], sweep[i + 1], theta, m, contact_band);
        if (!r.applicable) {
            if (agg.detail.empty()) agg.detail = "pair " + std::to_string(i) + ": " + r.detail;
            continue;
        }
        any_applicable = true;
        agg.intersection_free = agg.intersection_free && r.intersection_free;
        agg.one_sided = agg.one_sided && r.one_sided;
        agg.crossings += r.crossings;
        agg.contact_crossings += r.contact_crossings;
        agg.min_separation_g = std::min(agg.min_separation_g, r.min_separation_g);
        agg.samples += r.samples;
        if (agg.ordering_direction == 0) {
            agg.ordering_direction = r.ordering_direction;
        } else if (r.ordering_direction != 0 && r.ordering_direction != agg.ordering_direction) {
            agg.one_sided = false;
            if (agg.detail.empty()) agg.detail = "ordering direction flips between pairs";
        }
        if (agg.detail.empty() && !r.detail.empty())
            agg.detail = "pair " + std::to_string(i) + ": " + r.detail;
    }
    agg.applicable = any_applicable;
    if (!std::isfinite(agg.min_separation_g)) agg.min_separation_g = 0.0;
    return agg;
}

void slice_endpoints(double theta, double phi, double m, Vec3& a_point, Vec3& b_point) {
    const double rh = horizon_radius(m);
    const double astar = std::atan2(std::cos(phi), std::sin(phi) * std::cos(theta / 2.0));
    a_point = Vec3{rh * std::sin(astar), 0.0, rh * std::cos(astar)};
    b_point = Vec3{rh * std::sin(astar) * std::cos(theta), rh * std::sin(astar) * std::sin(theta),
                   rh * std::cos(astar)};
}

SliceReport plane_slice_check(const TriMesh& mesh, double theta, double phi, double m) {
    if (!(phi > 0.0 && phi < kPi / 2.0))
        throw std::invalid_argument("plane_slice_check: phi outside (0, pi/2)");
    SliceReport rep;
    const Vec3 n_p = wedge_plane_normal(theta, phi);

    std::vector<Vec3> pos = mesh.positions;
    std::vector<double> d(pos.size());
    for (size_t v = 0; v < pos.size(); ++v) d[v] = dot(n_p, pos[v]);
    for (const auto& tri : mesh.triangles)
        if (std::abs(d[tri[0]]) < 1e-10 && std::abs(d[tri[1]]) < 1e-10 &&
            std::abs(d[tri[2]]) < 1e-10)
            rep.transverse = false;  // the plane carries a whole triangle
    for (size_t v = 0; v < pos.size(); ++v)
        if (std::abs(d[v]) < 1e-10) {  // transversality perturbation
            pos[v] = pos[v] + n_p * 1e-9;
            d[v] = dot(n_p, pos[v]);
        }

    // One crossing point per crossed edge, shared between the two triangles
    // of the edge; segments chain through them.
    std::map<std::pair<int, int>, int> point_of_edge;
    std::vector<Vec3> points;
    std::vector<std::array<int, 2>> segs;
    auto edge_point = [&](int a, int b) {
        const std::pair<int, int> key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto it = point_of_edge.find(key);
        if (it != point_of_edge.end()) return it->second;
        const double t = d[a] / (d[a] - d[b]);
        points.push_back(pos[a] + (pos[b] - pos[a]) * t);
        point_of_edge.emplace(key, static_cast<int>(points.size()) - 1);
        return static_cast<int>(points.size()) - 1;
    };
    for (const auto& tri : mesh.triangles) {
        int ids[3];
        int count = 0;
        for (int i = 0; i < 3 && count < 3; ++i) {
            const int a = tri[i], b = tri[(i + 1) % 3];
            if (d[a] * d[b] < 0.0) ids[count++] = edge_point(a, b);
        }
        if (count == 2) segs.push_back({ids[0], ids[1]});
    }

    std::vector<std::vector<int>> seg_at(points.size());
    for (size_t s = 0; s < segs.size(); ++s) {
        seg_at[segs[s][0]].push_back(static_cast<int>(s));
        seg_at[segs[s][1]].push_back(static_cast<int>(s));
    }
    std::vector<char> used(segs.size(), 0);
    auto walk = [&](int start) {
        std::vector<Vec3> line{points[start]};
        int cur = start;
        while (true) {
            int next = -1;
            for (int s : seg_at[cur])
                if (!used[s]) {
                    next = s;
                    break;
                }
            if (next < 0) break;
            used[next] = 1;
            cur = segs[next][0] == cur ? segs[next][1] : segs[next][0];
            line.push_back(points[cur]);
        }
        return line;
    };
    std::vector<char> open_line;
    for (size_t p = 0; p < points.size(); ++p)
        if (seg_at[p].size() == 1 && !used[seg_at[p][0]]) {
            rep.polylines.push_back(walk(static_cast<int>(p)));
            open_line.push_back(1);
        }
    for (size_t s = 0; s < segs.size(); ++s)
        if (!used[s]) {  // closed loops
            rep.polylines.push_back(walk(segs[s][0]));
            open_line.push_back(0);
        }
    rep.components = static_cast<int>(rep.polylines.size());

    Vec3 a_point, b_point;
    slice_endpoints(theta, phi, m, a_point, b_point);
    double ea = kInf, eb = kInf;
    for (size_t i = 0; i < rep.polylines.size(); ++i) {
        if (!open_line[i] || rep.polylines[i].size() < 2) continue;
        for (const Vec3& e : {rep.polylines[i].front(), rep.polylines[i].back()}) {
            ea = std::min(ea, norm(e - a_point));
            eb = std::min(eb, norm(e - b_point));
        }
    }
    rep.endpoint_error_a = std::isfinite(ea) ? ea : kNan;
    rep.endpoint_error_b = std::isfinite(eb) ? eb : kNan;
    return rep;
}

AreaBoundReport area_bound_check(const TriMesh& mesh, const WedgeDomain& dom, double m) {
    AreaBoundReport rep;
    const double rh = horizon_radius(dom.m);
    const double r_in = rh + dom.eps, r_out = rh + dom.delta;
    const Vec3 n_qtheta{-std::sin(dom.theta), std::cos(dom.theta), 0.0};
    const Vec3 n_p = wedge_plane_normal(dom.theta, dom.phi);
    const std::function<bool(const Vec3&)> contains = [&dom](const Vec3& x) {
        return wedge_contains(dom, x);
    };

    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.positions[tri[0]];
        const Vec3& b = mesh.positions[tri[1]];
        const Vec3& c = mesh.positions[tri[2]];
        // Convex rejections: entirely past one face plane or sphere.
        if (a.y < 0.0 && b.y < 0.0 && c.y < 0.0) continue;
        if (dot(n_qtheta, a) > 0.0 && dot(n_qtheta, b) > 0.0 && dot(n_qtheta, c) > 0.0) continue;
        if (dot(n_p, a) < 0.0 && dot(n_p, b) < 0.0 && dot(n_p, c) < 0.0) continue;
        if (std::max({norm(a), norm(b), norm(c)}) < r_in) continue;
        if (norm(closest_point_on_triangle({0.0, 0.0, 0.0}, a, b, c)) > r_out) continue;
        const bool ia = contains(a), ib = contains(b), ic = contains(c);
        if (ia && ib && ic) {
            rep.lhs += triangle_area_g(m, a, b, c, QuadratureRule::EdgeMidpoints3);
            continue;
        }
        ++rep.straddling_triangles;
        rep.lhs += clip_area_recursive(m, a, b, c, 5, contains);
    }

    // Boundary faces of the domain.  The pole-side constraint keeps the
    // region strictly above the equator, so five faces are nondegenerate:
    // the two vertical planes (polar sectors beta in [0, a*]), the tilted
    // plane (in-plane wedge between its traces on the vertical planes), and
    // the two sphere caps (beta up to beta_max(alpha)).
    const auto s4 = [m](double r) {
        const double s = 1.0 + m / (2.0 * r);
        return s * s * s * s;
    };
    const double astar = std::atan2(std::cos(dom.phi), std::sin(dom.phi) * std::cos(dom.theta / 2.0));
    const double sa = std::sin(astar), ca = std::cos(astar);
    const double psi = std::acos(std::clamp(sa * sa * std::cos(dom.theta) + ca * ca, -1.0, 1.0));
    const double radial = simpson([&](double r) { return s4(r) * r; }, r_in, r_out, 2000);
    const double cap = simpson(
        [&](double alpha) {
            const double beta_max =
                std::atan2(std::cos(dom.phi), std::sin(dom.phi) * std::cos(alpha - dom.theta / 2.0));
            return 1.0 - std::cos(beta_max);
        },
        0.0, dom.theta, 2000);
    rep.rhs = (2.0 * astar + psi) * radial +
              (s4(r_in) * r_in * r_in + s4(r_out) * r_out * r_out) * cap;
    return rep;
}

GrowthFit area_growth_fit(const WeldedSurface& surface, double m, std::vector<double> radii) {
    if (radii.size() < 3) throw std::invalid_argument("area_growth_fit: need at least 3 radii");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("area_growth_fit: radii must be strictly increasing");
    const double rh = horizon_radius(m);
    if (!(radii.front() > rh))
        throw std::invalid_argument("area_growth_fit: radii must lie outside the horizon");

    GrowthFit fit;
    fit.radii = radii;
    const TriMesh& mesh = surface.mesh;
    for (const double r : radii) {
        const std::function<bool(const Vec3&)> contains = [rh, r](const Vec3& x) {
            const double s = norm(x);
            return s >= rh * (1.0 - 1e-12) && s <= r;
        };
        double area = 0.0;
        for (const auto& tri : mesh.triangles) {
            const Vec3& a = mesh.positions[tri[0]];
            const Vec3& b = mesh.positions[tri[1]];
            const Vec3& c = mesh.positions[tri[2]];
            const bool ia = contains(a), ib = contains(b), ic = contains(c);
            if (ia && ib && ic)
                area += triangle_area_g(m, a, b, c, QuadratureRule::EdgeMidpoints3);
            else if (ia || ib || ic)
                area += clip_area_recursive(m, a, b, c, 4, contains);
        }
        if (!(area > 0.0))
            throw std::runtime_error("area_growth_fit: empty clip at radius " + std::to_string(r));
        fit.areas.push_back(area);
    }

    const size_t n = radii.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(radii[i]), y = std::log(fit.areas[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

std::vector<double> end_asymptotics(const WeldedSurface& surface, const std::vector<double>& radii) {
    if (radii.size() < 2) throw std::invalid_argument("end_asymptotics: need at least 2 radii");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("end_asymptotics: radii must be strictly increasing");
    std::vector<double> sup(radii.size() - 1, -1.0);
    for (const Vec3& p : surface.mesh.positions) {
        const double r = norm(p);
        for (size_t i = 0; i + 1 < radii.size(); ++i)
            if (r > radii[i] && r <= radii[i + 1]) sup[i] = std::max(sup[i], std::abs(p.z));
    }
    for (double& s : sup)
        if (s < 0.0) s = kNan;  // empty annulus
    return sup;
}

bool non_increasing_tail(const std::vector<double>& series) {
    double prev = kNan;
    for (size_t i = series.size() / 2; i < series.size(); ++i) {
        if (std::isnan(series[i])) continue;
        if (!std::isnan(prev) && series[i] > prev + 1e-9) return false;
        prev = series[i];
    }
    return true;
}

StabilityReport stability_check(const TriMesh& mesh, double m,
                                const std::vector<std::vector<double>>& test_functions) {
    StabilityReport rep;
    rep.functions = static_cast<int>(test_functions.size());
    rep.min_q = kInf;
    rep.min_q_normalized = kInf;
    if (test_functions.empty()) {
        rep.min_q = rep.min_q_normalized = 0.0;
        return rep;
    }

    std::vector<double> a2(mesh.positions.size(), 0.0);
    std::vector<char> fitted(mesh.positions.size(), 0);
    for (const ShapeOperatorSample& s : second_form_norm(m, mesh)) {
        a2[s.vertex] = s.a_norm_g * s.a_norm_g;
        fitted[s.vertex] = 1;
    }
    std::vector<double> areas_g;
    triangle_areas_g(m, mesh, QuadratureRule::EdgeMidpoints3, areas_g);
    std::vector<double> mass_g(mesh.positions.size(), 0.0);
    for (int t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) mass_g[mesh.triangles[t][k]] += areas_g[t] / 3.0;

    for (const auto& f : test_functions) {
        if (static_cast<int>(f.size()) != mesh.vertex_count())
            throw std::invalid_argument("stability_check: test function size mismatch");
        for (int v = 0; v < mesh.vertex_count(); ++v)
            if (mesh.is_boundary[v] && f[v] != 0.0)
                throw std::invalid_argument(
                    "stability_check: test function nonzero on the boundary");

        // The Dirichlet energy of the induced surface metric is conformally
        // invariant in dimension two: it equals the Euclidean P1 energy.
        double dirichlet = 0.0;
        for (const auto& tri : mesh.triangles) {
            const Vec3& a = mesh.positions[tri[0]];
            const Vec3& b = mesh.positions[tri[1]];
            const Vec3& c = mesh.positions[tri[2]];
            const Vec3 nvec = cross(b - a, c - a);
            const double two_area = norm(nvec);
            if (two_area <= 0.0) continue;
            const Vec3 nh = nvec * (1.0 / two_area);
            const Vec3 g = (cross(nh, c - b) * f[tri[0]] + cross(nh, a - c) * f[tri[1]] +
                            cross(nh, b - a) * f[tri[2]]) *
                           (1.0 / two_area);
            dirichlet += 0.5 * two_area * norm2(g);
        }

        double potential = 0.0, fnorm2 = 0.0;
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (f[v] == 0.0) continue;
            if (!fitted[v] && !mesh.is_boundary[v]) ++rep.unfitted_support;
            potential += (a2[v] + radial_ricci(m, mesh.positions[v])) * f[v] * f[v] * mass_g[v];
            fnorm2 += f[v] * f[v] * mass_g[v];
        }
        const double q = dirichlet - potential;
        rep.min_q = std::min(rep.min_q, q);
        if (fnorm2 > 0.0) rep.min_q_normalized = std::min(rep.min_q_normalized, q / fnorm2);
    }
    if (!std::isfinite(rep.min_q_normalized)) rep.min_q_normalized = 0.0;  // all-zero functions
    return rep;
}

BlowupReport blowup_scaling_check(const TriMesh& mesh, double m, const Vec3& q, double lambda,
                                  double contact_band) {
    if (!(lambda > 0.0)) throw std::invalid_argument("blowup_scaling_check: lambda <= 0");
    if (!(norm(q) > 0.0)) throw std::invalid_argument("blowup_scaling_check: q at the origin");
    BlowupReport rep;
    rep.h_bound = 4.0 / (m * lambda);
    const double s = 1.0 + m / (2.0 * norm(q));
    rep.a_target = s * s;

    const double rh = horizon_radius(m);
    TriMesh scaled = mesh;
    for (Vec3& p : scaled.positions) p = (p - q) * lambda;
    const std::vector<double> h = euclidean_mean_curvature(scaled);
    for (int v = 0; v < scaled.vertex_count(); ++v) {
        if (scaled.is_boundary[v]) continue;
        const Vec3& p0 = mesh.positions[v];  // band test in original coordinates
        if (norm(p0) <= rh * (1.0 + contact_band) || std::abs(p0.z) <= contact_band * rh) continue;
        rep.h_sup_rescaled = std::max(rep.h_sup_rescaled, std::abs(h[v]));
    }

    int vq = 0;
    double best = kInf;
    for (int v = 0; v < scaled.vertex_count(); ++v) {
        const double d = norm(scaled.positions[v]);
        if (d < best) {
            best = d;
            vq = v;
        }
    }
    double a_norm = kNan;
    if (!quadric_second_form_euclidean(scaled, vq, a_norm)) a_norm = kNan;
    rep.a_origin = a_norm;
    return rep;
}

bool DiagnosticsReport::all_pass() const {
    for (const DiagnosticsEntry& e : entries)
        if (!e.pass) return false;
    return true;
}

void export_diagnostics_csv(const DiagnosticsReport& report, const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) throw std::runtime_error("export_diagnostics_csv: cannot open " + path.string());
    std::fprintf(f, "check_id,value,threshold,pass,provenance\n");
    for (const DiagnosticsEntry& e : report.entries)
        std::fprintf(f, "%s,%.17g,%.17g,%d,%s\n", e.check_id.c_str(), e.value, e.threshold,
                     e.pass ? 1 : 0, e.provenance.c_str());
    std::fclose(f);
}

std::string diagnostics_summary(const DiagnosticsReport& report) {
    std::string out;
    int passed = 0;
    for (const DiagnosticsEntry& e : report.entries) {
        char line[256];
        std::snprintf(line, sizeof(line), "[%s] %-28s value %-14.6g threshold %-12.6g %s\n",
                      e.pass ? "PASS" : "FAIL", e.check_id.c_str(), e.value, e.threshold,
                      e.provenance.c_str());
        out += line;
        if (e.pass) ++passed;
    }
    out += std::to_string(passed) + "/" + std::to_string(report.entries.size()) +
           " checks passed\n";
    return out;
}

}  // namespace schwarz
