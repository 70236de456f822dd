#include "radsense/sweep.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace radsense {

void validate_sweep_spec(const SweepSpec& spec) {
    if (!(spec.theta_r_step_deg > 0.0)) {
        throw ValidationError("sweep step must be positive");
    }
    if (!(spec.theta_r_end_deg >= spec.theta_r_start_deg)) {
        throw ValidationError("sweep end must not precede sweep start");
    }
    if (!(spec.range_m > 0.0)) {
        throw ValidationError("sweep radius must be positive");
    }
    if (!std::isfinite(spec.down_m) || !std::isfinite(spec.heading_rad)) {
        throw ValidationError("sweep down position and heading must be finite");
    }
}

std::size_t sweep_point_count(const SweepSpec& spec) {
    validate_sweep_spec(spec);
    const double steps =
        (spec.theta_r_end_deg - spec.theta_r_start_deg) / spec.theta_r_step_deg;
    return static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1;
}

double sweep_theta_deg(const SweepSpec& spec, std::size_t k) {
    const std::size_t count = sweep_point_count(spec);
    if (k >= count) {
        throw IndexOutOfRange("sweep index " + std::to_string(k) +
                              " exceeds point count " + std::to_string(count));
    }
    return spec.theta_r_start_deg +
           static_cast<double>(k) * spec.theta_r_step_deg;
}

AircraftState nominal_state_at(const SweepSpec& spec, std::size_t k) {
    const double theta_rad =
        sweep_theta_deg(spec, k) * std::numbers::pi / 180.0;
    return {spec.range_m * std::sin(theta_rad),
            spec.range_m * std::cos(theta_rad),
            spec.down_m,
            0.0,
            0.0,
            spec.heading_rad};
}

}  // namespace radsense
