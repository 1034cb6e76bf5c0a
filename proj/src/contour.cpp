#include "schwarzlab/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "schwarzlab/metric.hpp"

namespace schwarz {

namespace {

constexpr double kPi = std::numbers::pi;

void check_contour_params(double theta, double R, double m, int n_per_arc) {
    if (!(m > 0.0)) throw std::invalid_argument("build_contour: mass must be positive");
    if (!(theta > 0.0 && theta <= kPi)) throw std::invalid_argument("build_contour: theta outside (0, pi]");
    if (!(R > horizon_radius(m))) throw std::invalid_argument("build_contour: R must exceed the horizon radius");
    if (n_per_arc < 2) throw std::invalid_argument("build_contour: n_per_arc must be >= 2");
}

// Minimum distance between two segments, used for the self-intersection
// guard on the sampled polyline.
double segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
    const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    double s = 0.0, t = 0.0;
    const double c = dot(d1, r);
    const double b = dot(d1, d2);
    const double denom = a * e - b * b;
    if (denom > 1e-30) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
    t = e > 1e-30 ? std::clamp((b * s + f) / e, 0.0, 1.0) : 0.0;
    s = a > 1e-30 ? std::clamp((b * t - c) / a, 0.0, 1.0) : 0.0;
    return norm((p1 + d1 * s) - (p2 + d2 * t));
}

}  // namespace

const char* arc_tag_name(ArcTag tag) {
    switch (tag) {
        case ArcTag::Gamma0Horizon: return "gamma0_horizon";
        case ArcTag::Gamma0Radial: return "gamma0_radial";
        case ArcTag::CArc: return "c_arc";
        case ArcTag::GammaThetaRadial: return "gammatheta_radial";
        case ArcTag::GammaThetaHorizon: return "gammatheta_horizon";
    }
    return "?";
}

Vec3 arc_point(double theta, double R, double m, ArcTag tag, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("arc_point: t outside [0,1]");
    const double rh = horizon_radius(m);
    const double ct = std::cos(theta), st = std::sin(theta);
    // Shared exact corners keep adjacent arcs consistent at junctions.
    const Vec3 pole{0, 0, rh};
    const Vec3 equator0{rh, 0, 0};
    const Vec3 outer0{R, 0, 0};
    const Vec3 outer_theta{R * ct, R * st, 0};
    const Vec3 equator_theta{rh * ct, rh * st, 0};

    switch (tag) {
        case ArcTag::Gamma0Horizon: {
            if (t == 0.0) return pole;
            if (t == 1.0) return equator0;
            const double a = t * kPi / 2.0;
            return {rh * std::sin(a), 0.0, rh * std::cos(a)};
        }
        case ArcTag::Gamma0Radial: {
            if (t == 0.0) return equator0;
            if (t == 1.0) return outer0;
            return {rh + t * (R - rh), 0.0, 0.0};
        }
        case ArcTag::CArc: {
            if (t == 0.0) return outer0;
            if (t == 1.0) return outer_theta;
            const double a = t * theta;
            return {R * std::cos(a), R * std::sin(a), 0.0};
        }
        case ArcTag::GammaThetaRadial: {
            if (t == 0.0) return outer_theta;
            if (t == 1.0) return equator_theta;
            const double r = R + t * (rh - R);
            return {r * ct, r * st, 0.0};
        }
        case ArcTag::GammaThetaHorizon: {
            if (t == 0.0) return equator_theta;
            if (t == 1.0) return pole;
            const double a = (1.0 - t) * kPi / 2.0;
            return {rh * std::sin(a) * ct, rh * std::sin(a) * st, rh * std::cos(a)};
        }
    }
    throw std::invalid_argument("arc_point: bad tag");
}

std::vector<Vec3> Contour::corners() const {
    const double rh = horizon_radius(m);
    const double ct = std::cos(theta), st = std::sin(theta);
    return {{0, 0, rh}, {rh, 0, 0}, {R, 0, 0}, {R * ct, R * st, 0}, {rh * ct, rh * st, 0}};
}

Contour build_contour(double theta, double R, double m, int n_per_arc) {
    check_contour_params(theta, R, m, n_per_arc);
    Contour c;
    c.theta = theta;
    c.R = R;
    c.m = m;
    c.n_per_arc = n_per_arc;

    const ArcTag order[5] = {ArcTag::Gamma0Horizon, ArcTag::Gamma0Radial, ArcTag::CArc,
                             ArcTag::GammaThetaRadial, ArcTag::GammaThetaHorizon};
    for (const ArcTag tag : order) {
        for (int i = 0; i < n_per_arc; ++i) {
            const double t = static_cast<double>(i) / n_per_arc;
            c.samples.push_back({arc_point(theta, R, m, tag, t), tag, t});
        }
    }
    // Close the loop on the pole.
    c.samples.push_back({arc_point(theta, R, m, ArcTag::Gamma0Horizon, 0.0), ArcTag::Gamma0Horizon, 0.0});

    // Self-intersection guard at the sampled resolution: non-adjacent
    // segments of the closed polyline must stay apart.
    const size_t nseg = c.samples.size() - 1;
    double min_seg = std::numeric_limits<double>::max();
    for (size_t i = 0; i < nseg; ++i)
        min_seg = std::min(min_seg, norm(c.samples[i + 1].position - c.samples[i].position));
    for (size_t i = 0; i < nseg; ++i) {
        for (size_t j = i + 2; j < nseg; ++j) {
            if (i == 0 && j == nseg - 1) continue;  // adjacent through the closing point
            const double d = segment_distance(c.samples[i].position, c.samples[i + 1].position,
                                              c.samples[j].position, c.samples[j + 1].position);
            if (d < 1e-9 * std::max(1.0, min_seg))
                throw std::runtime_error("build_contour: sampled contour self-intersects");
        }
    }
    return c;
}

void export_contour_csv(const Contour& contour, const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) throw std::runtime_error("export_contour_csv: cannot open " + path.string());
    std::fprintf(f, "arc_tag,t,x,y,z\n");
    for (const ContourSample& s : contour.samples) {
        std::fprintf(f, "%s,%.17g,%.17g,%.17g,%.17g\n", arc_tag_name(s.tag), s.t, s.position.x,
                     s.position.y, s.position.z);
    }
    std::fclose(f);
}

Vec3 wedge_plane_normal(double theta, double phi) {
    return {-std::sin(phi) * std::cos(theta / 2.0), -std::sin(phi) * std::sin(theta / 2.0),
            std::cos(phi)};
}

bool wedge_contains(const WedgeDomain& dom, const Vec3& query) {
    if (!(dom.eps > 0.0 && dom.delta > dom.eps))
        throw std::invalid_argument("wedge_contains: need 0 < eps < delta");
    const double r_in = horizon_radius(dom.m) + dom.eps;
    const double r_out = horizon_radius(dom.m) + dom.delta;
    const Vec3 n_q0{0, 1, 0};                                       // side y >= 0
    const Vec3 n_qtheta{-std::sin(dom.theta), std::cos(dom.theta), 0};  // side <= 0
    const Vec3 n_p = wedge_plane_normal(dom.theta, dom.phi);        // side >= 0

    Vec3 x = query;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const double r = norm(x);
        const double d[5] = {dot(n_q0, x), -dot(n_qtheta, x), dot(n_p, x), r - r_in, r_out - r};
        bool near_face = false;
        for (double di : d)
            if (std::abs(di) < 1e-10) near_face = true;
        if (near_face && attempt == 0) {
            // Deterministic transversality perturbation.
            const double k = 1e-9 / std::sqrt(3.0);
            x = x + Vec3{k, k, k};
            continue;
        }
        for (double di : d)
            if (di < 0.0) return false;
        return true;
    }
    return false;  // unreachable
}

}  // namespace schwarz
