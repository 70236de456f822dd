#pragma once

#include <cstddef>

#include "radsense/geometry.hpp"

namespace radsense {

/// Circular-arc sweep of nominal aircraft positions around the radar: point
/// k sits at bearing theta_r (degrees, measured from north toward east) on a
/// horizontal circle of radius range_m, at constant down position and
/// heading, with zero roll and pitch.
struct SweepSpec {
    double theta_r_start_deg = 0.0;
    double theta_r_end_deg = 180.0;
    double theta_r_step_deg = 0.5;
    double range_m = 650000.0;
    double down_m = -3000.0;
    double heading_rad = 0.0;
};

/// Throws ValidationError if the grid or radius is degenerate.
void validate_sweep_spec(const SweepSpec& spec);

/// Number of grid points, endpoints included.
std::size_t sweep_point_count(const SweepSpec& spec);

/// Bearing of point k in degrees. Throws IndexOutOfRange.
double sweep_theta_deg(const SweepSpec& spec, std::size_t k);

/// Nominal pose at point k:
///   [R sin(theta_r), R cos(theta_r), down, 0, 0, heading].
AircraftState nominal_state_at(const SweepSpec& spec, std::size_t k);

}  // namespace radsense
