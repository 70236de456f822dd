#pragma once

#include <Eigen/Core>

#include "radsense/detection.hpp"
#include "radsense/geometry.hpp"
#include "radsense/rcs.hpp"

namespace radsense {

/// |cos(theta_a)| threshold below which the Euler parameterization is
/// flagged as close to gimbal lock.
inline constexpr double kGimbalCosEpsilon = 1e-6;

/// |sin(n lambda / 2)| threshold below which a spikeball pose is flagged as
/// sitting on a lobe corner, where the RCS azimuth derivative jumps.
inline constexpr double kRcsCornerEpsilon = 1e-9;

/// Ratio of body x-y projection to total body range below which the aspect
/// angle derivatives are flagged as poorly conditioned.
inline constexpr double kNearNadirRatio = 1e-2;

/// 6x6 covariance of the stacked pose [p_an p_ae p_ad phi theta psi].
struct PoseCovariance {
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();

    /// Block-diagonal sigma_pa^2 I3 (+) sigma_ang^2 I3.
    static PoseCovariance from_sigmas(double sigma_pa_m, double sigma_ang_rad);

    /// Validates and wraps a full matrix.
    static PoseCovariance from_matrix(const Eigen::Matrix<double, 6, 6>& c);

    /// Throws InvalidCovariance unless the matrix is finite, symmetric to
    /// 1e-12 relative, and has smallest eigenvalue >= -1e-10 * trace.
    void validate() const;
};

/// Row Jacobian of the detection probability with respect to the pose,
/// plus conditioning flags for the pose it was assembled at.
struct PdJacobian {
    Eigen::Matrix<double, 1, 6> a_p = Eigen::Matrix<double, 1, 6>::Zero();
    bool near_nadir = false;
    bool near_gimbal_lock = false;
    bool near_rcs_corner = false;
};

/// First-order propagated detection-probability variance.
struct PdVariance {
    double c_pd = 0.0;
    double sigma_pd = 0.0;
};

/// Gradient of the RCS with respect to the aspect angles. at_corner marks a
/// spikeball pose within kRcsCornerEpsilon of a lobe corner, where the
/// derivative is taken as zero.
struct RcsGradient {
    double d_lambda = 0.0;
    double d_phi = 0.0;
    bool at_corner = false;
};

/// d P_D / d snr = exp(-w^2) / (2 sqrt(pi) sqrt(snr + 0.5)).
double d_pd_d_snr(double snr_value, double p_fa);

/// d snr / d R = -4 c_r sigma_r / (k R^5).
double d_snr_d_range(const RadarSite& radar, double sigma_r, double range_m);

/// d R / d x: unit line-of-sight row for the position entries, zeros for the
/// attitude entries.
Eigen::Matrix<double, 1, 6> d_range_d_state(const AircraftState& state,
                                            const RadarSite& radar);

/// d snr / d sigma_r = c_r / (k R^4).
double d_snr_d_sigma(const RadarSite& radar, double range_m);

/// d p_r^b / d x: -M for the position entries, dM/d(angle) * (p_r - p_a)
/// columns for the attitude entries.
Eigen::Matrix<double, 3, 6> d_body_d_state(const AircraftState& state,
                                           const RadarSite& radar);

/// d (lambda, phi) / d p_r^b. Throws NadirSingularity when the x-y
/// projection is shorter than kNadirEpsilonM.
Eigen::Matrix<double, 2, 3> d_angles_d_body(const BodyVector& b);

/// d sigma_r / d (lambda, phi) for the given model.
RcsGradient d_rcs_d_angles(const RcsModel& model, const AspectAngles& angles);

/// Assembles the full row Jacobian
///   A_P = dP/dS * (dS/dR * dR/dx + dS/dsigma * dsigma/dangles
///                  * dangles/dbody * dbody/dx)
/// and the conditioning flags at the pose.
PdJacobian assemble_a_p(const AircraftState& state, const RadarSite& radar,
                        const RcsModel& model);

/// First-order variance A_P C A_P^T with its square root. Rounding residue
/// in [-1e-18, 0) clamps to zero; anything more negative throws
/// InvalidCovariance.
PdVariance propagate_variance(const PdJacobian& jacobian,
                              const PoseCovariance& covariance);

}  // namespace radsense
