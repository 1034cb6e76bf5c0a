#pragma once

// The Plateau contour Gamma_{theta,R} consists of two geodesic arms and a
// closing circle: gamma_0 runs from the pole (0,0,m/2) along the horizon
// great circle in the xz-plane to (m/2,0,0), then radially out to (R,0,0);
// gamma_theta is its image under rotating azimuth 0 -> theta; the C-arc is
// the origin-centred circle of radius R in the equatorial plane subtending
// azimuth [0, theta].  All five sub-arcs lie inside totally geodesic
// surfaces, so the contour is a geodesic polygon.

#include <filesystem>
#include <vector>

#include "schwarzlab/vec3.hpp"

namespace schwarz {

enum class ArcTag {
    Gamma0Horizon,      // pole -> equator at azimuth 0
    Gamma0Radial,       // m/2 -> R along azimuth 0
    CArc,               // azimuth 0 -> theta at radius R
    GammaThetaRadial,   // R -> m/2 along azimuth theta
    GammaThetaHorizon,  // equator -> pole at azimuth theta
};

const char* arc_tag_name(ArcTag tag);

struct ContourSample {
    Vec3 position;
    ArcTag tag;
    double t;  // parameter within the sub-arc, in [0, 1]
};

struct Contour {
    double theta = 0.0;
    double R = 0.0;
    double m = 0.0;
    int n_per_arc = 0;
    // Ordered counterclockwise seen from +z, one closed loop; the final
    // sample repeats the first (the pole).
    std::vector<ContourSample> samples;

    // Pole, equator@0, outer@0, outer@theta, equator@theta.
    std::vector<Vec3> corners() const;
};

// Exact point on a sub-arc; corners (t = 0 or 1) are returned from closed
// forms shared between adjacent arcs.
Vec3 arc_point(double theta, double R, double m, ArcTag tag, double t);

// n_per_arc uniform-parameter segments on each of the five sub-arcs.
// Throws std::invalid_argument on theta outside (0, pi], R <= m/2, m <= 0,
// n_per_arc < 2, and std::runtime_error if the sampled polyline
// self-intersects.
Contour build_contour(double theta, double R, double m, int n_per_arc);

void export_contour_csv(const Contour& contour, const std::filesystem::path& path);

// Closed wedge region between the vertical planes at azimuth 0 and theta,
// below the tilted plane P_{theta,phi} (the side containing the upper
// pole), and between the spheres of radius m/2+eps and m/2+delta.
struct WedgeDomain {
    double theta = 0.0;
    double phi = 0.0;
    double eps = 0.0;    // inner sphere radius m/2 + eps
    double delta = 0.0;  // outer sphere radius m/2 + delta
    double m = 0.0;
};

Vec3 wedge_plane_normal(double theta, double phi);  // unit normal of P_{theta,phi}

// Membership with the deterministic transversality rule: when any face
// distance is within 1e-10, the query is re-evaluated at
// x + 1e-9 * (1,1,1)/sqrt(3).
bool wedge_contains(const WedgeDomain& dom, const Vec3& x);

}  // namespace schwarz
