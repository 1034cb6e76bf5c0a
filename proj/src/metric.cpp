#include "schwarzlab/metric.hpp"

namespace schwarz {

namespace {

void check_inputs(double m, const Vec3& x) {
    if (!(m > 0.0)) throw std::domain_error("metric: mass must be positive");
    if (norm2(x) == 0.0) throw std::domain_error("metric: point at excluded origin");
}

}  // namespace

double conformal_factor(double m, const Vec3& x) {
    check_inputs(m, x);
    const double s = 1.0 + m / (2.0 * norm(x));
    return s * s * s * s;
}

double conformal_scale(double m, const Vec3& x) {
    check_inputs(m, x);
    const double s = 1.0 + m / (2.0 * norm(x));
    return s * s;
}

double tangent_norm_g(double m, const Vec3& x, const Vec3& v) {
    return conformal_scale(m, x) * norm(v);
}

double radial_ricci(double m, const Vec3& x) {
    check_inputs(m, x);
    const double r = norm(x);
    const double s = 1.0 + m / (2.0 * r);
    const double s6 = s * s * s * s * s * s;
    return -2.0 * m / (r * r * r * s6);
}

double conformal_exponent_normal_derivative(double m, const Vec3& x, const Vec3& nu) {
    check_inputs(m, x);
    const double r = norm(x);
    const double s = 1.0 + m / (2.0 * r);
    const double du_dr = -m / (r * r * s);
    return du_dr * dot(nu, x) / r;
}

double mean_curvature_conformal(double m, const Vec3& x, const Vec3& nu, double h_euc) {
    check_inputs(m, x);
    const double r = norm(x);
    const double s = 1.0 + m / (2.0 * r);
    const double e_minus_u = 1.0 / (s * s);
    return e_minus_u * (h_euc - 2.0 * conformal_exponent_normal_derivative(m, x, nu));
}

Vec3 conformal_factor_gradient(double m, const Vec3& x) {
    check_inputs(m, x);
    const double r = norm(x);
    const double s = 1.0 + m / (2.0 * r);
    // d/dr (s^4) = 4 s^3 * (-m / (2 r^2))
    const double dphi_dr = -2.0 * m * s * s * s / (r * r);
    return x * (dphi_dr / r);
}

}  // namespace schwarz
