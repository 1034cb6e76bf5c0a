#pragma once

// Conformal description of the doubled Schwarzschild 3-manifold:
// the metric on R^3 \ {0} is g = (1 + m/(2|x|))^4 * delta.  The horizon
// sphere |x| = m/2 is the fixed set of the inversion x -> (m/2)^2 x/|x|^2,
// which exchanges the two asymptotically flat ends isometrically.

#include "schwarzlab/vec3.hpp"

namespace schwarz {

inline double horizon_radius(double m) { return 0.5 * m; }

// (1 + m/(2|x|))^4 — multiplies Euclidean area elements.
double conformal_factor(double m, const Vec3& x);

// (1 + m/(2|x|))^2 — multiplies Euclidean lengths.
double conformal_scale(double m, const Vec3& x);

// |v|_g at the point x.
double tangent_norm_g(double m, const Vec3& x, const Vec3& v);

// Ric_g(nu, nu) for the g-unit radial direction: -2m / (|x|^3 (1+m/(2|x|))^6).
// This is the smallest eigenvalue of the Ricci tensor, so it lower-bounds
// Ric_g(nu, nu) for every unit nu.
double radial_ricci(double m, const Vec3& x);

// Scalar mean curvature transported from the Euclidean metric to g.
//
// Conventions: H_euc is the trace of the Euclidean shape operator with
// respect to the Euclidean unit normal nu, so a sphere of radius r with
// outward normal has H_euc = -2/r (mean curvature vector points inward).
// With u = 2 ln(1 + m/(2|x|)) (so g = e^{2u} delta),
//
//   H_g = e^{-u} (H_euc - 2 du/dnu),   du/dnu = u'(|x|) <nu, x/|x|>.
//
// Both the horizon sphere and planes through the origin come out exactly
// minimal under this transform.
double mean_curvature_conformal(double m, const Vec3& x, const Vec3& nu, double h_euc);

// d/dnu of u = 2 ln(1 + m/(2|x|)); u'(r) = -m / (r^2 (1 + m/(2r))).
double conformal_exponent_normal_derivative(double m, const Vec3& x, const Vec3& nu);

// Euclidean gradient of the conformal factor (1+m/(2|x|))^4.
Vec3 conformal_factor_gradient(double m, const Vec3& x);

}  // namespace schwarz
