#include "radsense/jacobians.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace radsense {

namespace {

double signum(double x) {
    if (x > 0.0) {
        return 1.0;
    }
    if (x < 0.0) {
        return -1.0;
    }
    return 0.0;
}

}  // namespace

PoseCovariance PoseCovariance::from_sigmas(double sigma_pa_m,
                                           double sigma_ang_rad) {
    if (!(sigma_pa_m >= 0.0) || !(sigma_ang_rad >= 0.0) ||
        !std::isfinite(sigma_pa_m) || !std::isfinite(sigma_ang_rad)) {
        throw ValidationError("standard deviations must be finite and >= 0");
    }
    PoseCovariance out;
    const double vp = sigma_pa_m * sigma_pa_m;
    const double va = sigma_ang_rad * sigma_ang_rad;
    out.m.diagonal() << vp, vp, vp, va, va, va;
    return out;
}

PoseCovariance PoseCovariance::from_matrix(
    const Eigen::Matrix<double, 6, 6>& c) {
    PoseCovariance out;
    out.m = c;
    out.validate();
    return out;
}

void PoseCovariance::validate() const {
    if (!m.allFinite()) {
        throw InvalidCovariance("covariance has non-finite entries");
    }
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        throw InvalidCovariance("covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> solver(
        m, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -1e-10 * m.trace()) {
        throw InvalidCovariance("covariance is not positive semidefinite");
    }
}

double d_pd_d_snr(double snr_value, double p_fa) {
    if (!(p_fa > 0.0 && p_fa < 1.0)) {
        throw InvalidPfa("p_fa must lie in (0, 1)");
    }
    if (!(snr_value >= 0.0)) {
        throw ValidationError("snr must be nonnegative");
    }
    const double root = std::sqrt(snr_value + 0.5);
    const double w = std::sqrt(-std::log(p_fa)) - root;
    return std::exp(-w * w) * (0.5 * std::numbers::inv_sqrtpi) / root;
}

double d_snr_d_range(const RadarSite& radar, double sigma_r, double range_m) {
    if (!(range_m > 0.0)) {
        throw ZeroRange("range must be positive");
    }
    const double r2 = range_m * range_m;
    const double r5 = r2 * r2 * range_m;
    return -4.0 * radar.c_r * sigma_r / (kBoltzmannJPerK * r5);
}

Eigen::Matrix<double, 1, 6> d_range_d_state(const AircraftState& state,
                                            const RadarSite& radar) {
    const Eigen::Vector3d delta = state.position() - radar.position();
    const double r = delta.norm();
    if (!(r > 0.0)) {
        throw ZeroRange("range must be positive");
    }
    Eigen::Matrix<double, 1, 6> row = Eigen::Matrix<double, 1, 6>::Zero();
    row.head<3>() = delta.transpose() / r;
    return row;
}

double d_snr_d_sigma(const RadarSite& radar, double range_m) {
    if (!(range_m > 0.0)) {
        throw ZeroRange("range must be positive");
    }
    const double r2 = range_m * range_m;
    return radar.c_r / (kBoltzmannJPerK * (r2 * r2));
}

Eigen::Matrix<double, 3, 6> d_body_d_state(const AircraftState& state,
                                           const RadarSite& radar) {
    const double cphi = std::cos(state.phi_a);
    const double sphi = std::sin(state.phi_a);
    const double cth = std::cos(state.theta_a);
    const double sth = std::sin(state.theta_a);
    const double cpsi = std::cos(state.psi_a);
    const double spsi = std::sin(state.psi_a);

    Eigen::Matrix3d dm_dphi;
    dm_dphi << 0.0, sphi * spsi + cpsi * cphi * sth,
        cphi * spsi - cpsi * sphi * sth,  //
        0.0, -sphi * cpsi + cphi * spsi * sth,
        -cpsi * cphi - sphi * spsi * sth,  //
        0.0, cth * cphi, -sphi * cth;

    Eigen::Matrix3d dm_dtheta;
    dm_dtheta << -cpsi * sth, cpsi * sphi * cth, cphi * cpsi * cth,  //
        -spsi * sth, sphi * spsi * cth, cphi * spsi * cth,           //
        -cth, -sth * sphi, -cphi * sth;

    Eigen::Matrix3d dm_dpsi;
    dm_dpsi << -spsi * cth, -cphi * cpsi - spsi * sphi * sth,
        sphi * cpsi - cphi * spsi * sth,  //
        cth * cpsi, -cphi * spsi + sphi * cpsi * sth,
        spsi * sphi + cphi * cpsi * sth,  //
        0.0, 0.0, 0.0;

    const Eigen::Vector3d delta = radar.position() - state.position();
    Eigen::Matrix<double, 3, 6> jac;
    jac.leftCols<3>() = -dcm_ned_to_body(state);
    jac.col(3) = dm_dphi * delta;
    jac.col(4) = dm_dtheta * delta;
    jac.col(5) = dm_dpsi * delta;
    return jac;
}

Eigen::Matrix<double, 2, 3> d_angles_d_body(const BodyVector& b) {
    const double x = b.p_rx;
    const double y = b.p_ry;
    const double z = b.p_rz;
    const double rho2 = x * x + y * y;
    const double rho = std::sqrt(rho2);
    if (rho < kNadirEpsilonM) {
        throw NadirSingularity(
            "radar lies on the body z axis; aspect derivatives are undefined");
    }
    const double r2 = rho2 + z * z;
    const double alpha = r2 * rho;
    Eigen::Matrix<double, 2, 3> jac;
    jac << -y / rho2, x / rho2, 0.0,  //
        -x * z / alpha, -y * z / alpha, rho / r2;
    return jac;
}

RcsGradient d_rcs_d_angles(const RcsModel& model, const AspectAngles& angles) {
    RcsGradient out;
    if (std::holds_alternative<ConstantRcs>(model)) {
        return out;
    }
    if (const auto* e = std::get_if<EllipsoidRcs>(&model)) {
        const double sl = std::sin(angles.lambda);
        const double cl = std::cos(angles.lambda);
        const double sp = std::sin(angles.phi);
        const double cp = std::cos(angles.phi);
        const double dx = e->a * sl * cp;
        const double dy = e->b * sl * sp;
        const double dz = e->c * cl;
        const double d = dx * dx + dy * dy + dz * dz;
        if (!(d > 0.0)) {
            throw DegenerateModel("ellipsoid RCS denominator vanished");
        }
        const double abc = e->a * e->b * e->c;
        const double common = -2.0 * std::numbers::pi * abc * abc / (d * d * d);
        const double kappa = e->a * e->a * cp * cp + e->b * e->b * sp * sp -
                             e->c * e->c;
        out.d_lambda = common * std::sin(2.0 * angles.lambda) * kappa;
        out.d_phi = common * (e->b * e->b - e->a * e->a) * sl * sl *
                    std::sin(2.0 * angles.phi);
        return out;
    }
    const auto& s = std::get<SpikeballRcs>(model);
    const double arg = 0.5 * s.n * angles.lambda;
    const double sh = std::sin(arg);
    if (std::abs(sh) < kRcsCornerEpsilon) {
        out.at_corner = true;
        return out;
    }
    out.d_lambda =
        0.5 * s.n * s.a_s * std::cos(arg) * signum(s.a_s * sh);
    return out;
}

PdJacobian assemble_a_p(const AircraftState& state, const RadarSite& radar,
                        const RcsModel& model) {
    PdJacobian out;
    const double r = range(state, radar);
    double sigma_r = 0.0;
    Eigen::Matrix<double, 1, 6> sigma_term =
        Eigen::Matrix<double, 1, 6>::Zero();
    if (std::holds_alternative<ConstantRcs>(model)) {
        sigma_r = rcs_value(model, AspectAngles{});
    } else {
        const BodyVector b = radar_in_body(state, radar);
        const AspectAngles ang = aspect_angles(b);
        sigma_r = rcs_value(model, ang);
        const RcsGradient grad = d_rcs_d_angles(model, ang);
        out.near_rcs_corner = grad.at_corner;
        Eigen::Matrix<double, 1, 2> drcs;
        drcs << grad.d_lambda, grad.d_phi;
        sigma_term = (drcs * d_angles_d_body(b)) * d_body_d_state(state, radar);
        const double rho = std::hypot(b.p_rx, b.p_ry);
        out.near_nadir = rho < kNearNadirRatio * b.as_vector().norm();
    }
    const double s = snr(radar, sigma_r, r);
    out.a_p = d_pd_d_snr(s, radar.p_fa) *
              (d_snr_d_range(radar, sigma_r, r) * d_range_d_state(state, radar) +
               d_snr_d_sigma(radar, r) * sigma_term);
    out.near_gimbal_lock = std::abs(std::cos(state.theta_a)) < kGimbalCosEpsilon;
    return out;
}

PdVariance propagate_variance(const PdJacobian& jacobian,
                              const PoseCovariance& covariance) {
    covariance.validate();
    PdVariance out;
    out.c_pd = (jacobian.a_p * covariance.m * jacobian.a_p.transpose())(0, 0);
    if (out.c_pd < 0.0) {
        if (out.c_pd < -1e-18) {
            throw InvalidCovariance(
                "propagated variance is negative beyond rounding residue");
        }
        out.c_pd = 0.0;
    }
    out.sigma_pd = std::sqrt(out.c_pd);
    return out;
}

}  // namespace radsense
