#pragma once

// Isometries of the doubled Schwarzschild manifold used here are words in
// three primitives: reflections across planes through the origin, rotations
// about the z-axis, and the horizon inversion x -> (m/2)^2 x / |x|^2.
// Linear orthogonal maps commute with the inversion, and all three
// primitives preserve the conformal factor, so every word is an exact
// g-isometry.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "schwarzlab/vec3.hpp"

namespace schwarz {

struct PlaneReflection {
    Vec3 normal;  // unit normal of a plane through the origin
};

struct AxisRotation {
    double angle;  // about +z, counterclockwise seen from +z
};

struct HorizonInversion {
    double m;  // fixes the sphere |x| = m/2 pointwise
};

using IsometryPrimitive = std::variant<PlaneReflection, AxisRotation, HorizonInversion>;

struct Isometry {
    // Applied right-to-left: steps.back() acts first (composition order).
    std::vector<IsometryPrimitive> steps;
    std::string label;

    static Isometry identity() { return {}; }
    static Isometry plane_reflection(const Vec3& unit_normal);
    static Isometry axis_rotation(double angle);
    static Isometry horizon_inversion(double m);
};

Vec3 apply_isometry(const Isometry& t, const Vec3& x);

// T1 after T2 (i.e. x -> T1(T2(x))).
Isometry compose(const Isometry& t1, const Isometry& t2);

// Exact inverse: reversed word with rotation angles negated.
Isometry inverse(const Isometry& t);

// Central finite-difference Jacobian, step 1e-6 * max(1, |x|).
Mat3 isometry_differential(const Isometry& t, const Vec3& x);

// max over fixed probe directions v of
// | |dT_x v|_g(Tx) - |v|_g(x) | / |v|_g(x).
double isometry_residual(double m, const Isometry& t, const Vec3& x);

// True when t1 and t2 act identically (within tol) on a fixed generic
// probe set of four points.
bool same_action(const Isometry& t1, const Isometry& t2, double tol = 1e-9);

struct IsometryGroup {
    int tau = 0;
    double m = 0.0;
    std::vector<Isometry> elements;  // closure of {a, b_tau, c_tau}, identity first
};

// Generators for the genus-tau construction, theta = pi/(tau+1):
//   a     = Ref_{Q_0} o Inversion          (pi-rotation across the horizon
//                                           geodesic in the xz-plane)
//   b_tau = Ref_{Q_theta} o Ref_{z=0}      (pi-rotation about the equatorial
//                                           ray at azimuth theta)
//   c_tau = Rot_z(2 theta)
// The closure under composition has 4 tau + 4 elements; its subgroup of
// linear elements is the dihedral group of order 2 tau + 2.
Isometry generator_a(double m);
Isometry generator_b(int tau);
Isometry generator_c(int tau);
IsometryGroup generate_group(int tau, double m);

// True if t is linear (contains no inversion action); tested numerically
// by homogeneity of |t(x)|.
bool is_linear_action(const Isometry& t);

// True if t exchanges the upper and lower z-hemispheres.
bool flips_hemispheres(const Isometry& t);

// Chamber parity of the tiling: a copy mapped by t must have its triangle
// winding flipped iff this is true.  Equals (inversion parity) XOR
// (hemisphere flip); see assembly.
bool winding_flip(const Isometry& t);

}  // namespace schwarz
