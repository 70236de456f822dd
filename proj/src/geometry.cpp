#include "radsense/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace radsense {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw ValidationError(std::string(name) + " must be finite");
    }
}

}  // namespace

double canonical_angle(double angle_rad) {
    const double wrapped = std::remainder(angle_rad, 2.0 * std::numbers::pi);
    if (wrapped <= -std::numbers::pi) {
        return std::numbers::pi;
    }
    return wrapped;
}

AircraftState::AircraftState(double pn, double pe, double pd, double phi,
                             double theta, double psi)
    : p_an(pn),
      p_ae(pe),
      p_ad(pd),
      phi_a(canonical_angle(phi)),
      theta_a(canonical_angle(theta)),
      psi_a(canonical_angle(psi)) {
    require_finite(pn, "p_an");
    require_finite(pe, "p_ae");
    require_finite(pd, "p_ad");
    require_finite(phi, "phi_a");
    require_finite(theta, "theta_a");
    require_finite(psi, "psi_a");
}

AircraftState AircraftState::from_vector(const Eigen::Matrix<double, 6, 1>& x) {
    return {x(0), x(1), x(2), x(3), x(4), x(5)};
}

Eigen::Matrix<double, 6, 1> AircraftState::as_vector() const {
    Eigen::Matrix<double, 6, 1> x;
    x << p_an, p_ae, p_ad, phi_a, theta_a, psi_a;
    return x;
}

RadarSite::RadarSite(double pn, double pe, double pd, double c_r_in,
                     double p_fa_in)
    : p_rn(pn), p_re(pe), p_rd(pd), c_r(c_r_in), p_fa(p_fa_in) {
    require_finite(pn, "p_rn");
    require_finite(pe, "p_re");
    require_finite(pd, "p_rd");
    require_finite(c_r_in, "c_r");
    if (!(c_r > 0.0)) {
        throw ValidationError("c_r must be positive");
    }
    if (!(p_fa > 0.0 && p_fa < 1.0)) {
        throw InvalidPfa("p_fa must lie in (0, 1)");
    }
}

Eigen::Matrix3d dcm_ned_to_body(const AircraftState& state) {
    const double cphi = std::cos(state.phi_a);
    const double sphi = std::sin(state.phi_a);
    const double cth = std::cos(state.theta_a);
    const double sth = std::sin(state.theta_a);
    const double cpsi = std::cos(state.psi_a);
    const double spsi = std::sin(state.psi_a);

    Eigen::Matrix3d m;
    m(0, 0) = cpsi * cth;
    m(0, 1) = -cphi * spsi + cpsi * sphi * sth;
    m(0, 2) = sphi * spsi + cphi * cpsi * sth;
    m(1, 0) = cth * spsi;
    m(1, 1) = cphi * cpsi + sphi * spsi * sth;
    m(1, 2) = -cpsi * sphi + cphi * spsi * sth;
    m(2, 0) = -sth;
    m(2, 1) = cth * sphi;
    m(2, 2) = cphi * cth;
    return m;
}

BodyVector radar_in_body(const AircraftState& state, const RadarSite& radar) {
    const Eigen::Vector3d delta = radar.position() - state.position();
    const Eigen::Vector3d b = dcm_ned_to_body(state) * delta;
    return {b(0), b(1), b(2)};
}

AspectAngles aspect_angles(const BodyVector& b) {
    const double rho = std::hypot(b.p_rx, b.p_ry);
    if (rho < kNadirEpsilonM) {
        throw NadirSingularity(
            "radar lies on the body z axis; RCS azimuth is undefined");
    }
    double lambda = std::atan2(b.p_ry, b.p_rx);
    if (lambda <= -std::numbers::pi) {
        lambda = std::numbers::pi;
    }
    const double phi = std::atan2(b.p_rz, rho);
    return {lambda, phi};
}

double range(const AircraftState& state, const RadarSite& radar) {
    return (state.position() - radar.position()).norm();
}

}  // namespace radsense
