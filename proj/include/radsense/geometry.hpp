#pragma once

#include <Eigen/Core>

#include "radsense/errors.hpp"

namespace radsense {

/// Radius (m) of the body x-y projection of a vector below which the vector
/// is treated as lying on the body z axis, where the RCS azimuth is
/// undefined.
inline constexpr double kNadirEpsilonM = 1e-9;

/// Wraps an angle in radians to the interval (-pi, pi].
double canonical_angle(double angle_rad);

/// Aircraft pose: NED position in meters and roll/pitch/yaw Euler angles in
/// radians (ZYX convention). Angles are wrapped to (-pi, pi] on
/// construction; non-finite entries are rejected.
struct AircraftState {
    double p_an = 0.0;     ///< north position (m)
    double p_ae = 0.0;     ///< east position (m)
    double p_ad = 0.0;     ///< down position (m)
    double phi_a = 0.0;    ///< roll (rad)
    double theta_a = 0.0;  ///< pitch (rad)
    double psi_a = 0.0;    ///< yaw (rad)

    AircraftState() = default;
    AircraftState(double pn, double pe, double pd, double phi, double theta,
                  double psi);

    /// Builds a state from the stacked vector [p_an p_ae p_ad phi theta psi].
    static AircraftState from_vector(const Eigen::Matrix<double, 6, 1>& x);

    Eigen::Vector3d position() const { return {p_an, p_ae, p_ad}; }
    Eigen::Vector3d angles() const { return {phi_a, theta_a, psi_a}; }
    Eigen::Matrix<double, 6, 1> as_vector() const;
};

/// Radar site: NED position in meters, lumped radar constant c_r, and
/// single-pulse false-alarm probability.
struct RadarSite {
    double p_rn = 0.0;
    double p_re = 0.0;
    double p_rd = 0.0;
    double c_r = 167.4;
    double p_fa = 1.7e-4;

    RadarSite() = default;
    RadarSite(double pn, double pe, double pd, double c_r_in, double p_fa_in);

    Eigen::Vector3d position() const { return {p_rn, p_re, p_rd}; }
};

/// NED displacement from aircraft to radar expressed in body axes (m).
struct BodyVector {
    double p_rx = 0.0;
    double p_ry = 0.0;
    double p_rz = 0.0;

    Eigen::Vector3d as_vector() const { return {p_rx, p_ry, p_rz}; }
};

/// RCS aspect angles (rad): azimuth lambda in (-pi, pi] measured in the body
/// x-y plane from the nose, and elevation phi in [-pi/2, pi/2], positive
/// toward the belly.
struct AspectAngles {
    double lambda = 0.0;
    double phi = 0.0;
};

/// Direction cosine matrix taking NED components to body components for the
/// given roll/pitch/yaw.
Eigen::Matrix3d dcm_ned_to_body(const AircraftState& state);

/// Expresses the aircraft-to-radar displacement in body axes.
BodyVector radar_in_body(const AircraftState& state, const RadarSite& radar);

/// Aspect angles of a body-frame vector. Throws NadirSingularity when the
/// x-y projection is shorter than kNadirEpsilonM.
AspectAngles aspect_angles(const BodyVector& b);

/// Euclidean aircraft-radar distance (m).
double range(const AircraftState& state, const RadarSite& radar);

}  // namespace radsense
