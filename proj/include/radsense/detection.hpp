#pragma once

#include "radsense/geometry.hpp"
#include "radsense/rcs.hpp"

namespace radsense {

/// Boltzmann constant (J/K) as used in the SNR model.
inline constexpr double kBoltzmannJPerK = 1.38e-23;

/// Complementary error function. Relative error is below 1e-12 for
/// |z| <= 6; see tests/erfc_oracle.inc for the frozen reference table.
double erfc(double z);

/// Single-pulse signal-to-noise ratio c_r * sigma_r / (k * R^4).
/// Throws ZeroRange unless range_m > 0.
double snr(const RadarSite& radar, double sigma_r, double range_m);

/// Probability of detection 0.5 * erfc(sqrt(-ln p_fa) - sqrt(snr + 0.5)).
/// Throws InvalidPfa unless p_fa lies in (0, 1) and ValidationError for
/// negative snr.
double probability_of_detection(double snr_value, double p_fa);

/// Detection chain evaluated at one pose.
struct DetectionPoint {
    double range_m = 0.0;
    double sigma_r = 0.0;  ///< RCS (m^2)
    double snr = 0.0;
    double w = 0.0;        ///< erfc argument
    double p_d = 0.0;      ///< probability of detection
};

/// Evaluates range, aspect, RCS, SNR, and detection probability for one
/// pose. Angle-dependent models throw NadirSingularity when the radar sits
/// on the body z axis; the constant model never needs aspect angles.
DetectionPoint evaluate_point(const AircraftState& state,
                              const RadarSite& radar, const RcsModel& model);

}  // namespace radsense
