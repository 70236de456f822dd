#include "radsense/detection.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace radsense {

namespace {

/// Maclaurin series for erf(z), accurate for small |z| where the alternating
/// terms decay before cancellation matters.
double erf_series(double z) {
    const double z2 = z * z;
    double power = z;  // (-1)^n z^(2n+1) / n!
    double sum = z;
    for (int n = 1; n < 200; ++n) {
        power *= -z2 / n;
        const double term = power / (2 * n + 1);
        sum += term;
        if (std::abs(term) <
            0.25 * std::numeric_limits<double>::epsilon() * std::abs(sum)) {
            break;
        }
    }
    return 2.0 * std::numbers::inv_sqrtpi * sum;
}

/// Legendre continued fraction
///   erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
/// evaluated with the modified Lentz algorithm. Converges quickly for
/// z >= 1.5.
double erfc_continued_fraction(double z) {
    constexpr double tiny = 1e-300;
    double f = z;
    double c = z;
    double d = 0.0;
    for (int n = 1; n < 500; ++n) {
        const double a = 0.5 * n;
        d = z + a * d;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = z + a / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < std::numeric_limits<double>::epsilon()) {
            break;
        }
    }
    return std::exp(-z * z) * std::numbers::inv_sqrtpi / f;
}

}  // namespace

double erfc(double z) {
    if (std::isnan(z)) {
        return z;
    }
    if (z < 0.0) {
        return 2.0 - erfc(-z);
    }
    if (z < 1.5) {
        return 1.0 - erf_series(z);
    }
    if (z > 27.5) {
        return 0.0;  // exp(-z^2) underflows
    }
    return erfc_continued_fraction(z);
}

double snr(const RadarSite& radar, double sigma_r, double range_m) {
    if (!(range_m > 0.0)) {
        throw ZeroRange("range must be positive");
    }
    const double r2 = range_m * range_m;
    return radar.c_r * sigma_r / (kBoltzmannJPerK * (r2 * r2));
}

double probability_of_detection(double snr_value, double p_fa) {
    if (!(p_fa > 0.0 && p_fa < 1.0)) {
        throw InvalidPfa("p_fa must lie in (0, 1)");
    }
    if (!(snr_value >= 0.0)) {
        throw ValidationError("snr must be nonnegative");
    }
    const double w = std::sqrt(-std::log(p_fa)) - std::sqrt(snr_value + 0.5);
    return 0.5 * erfc(w);
}

DetectionPoint evaluate_point(const AircraftState& state,
                              const RadarSite& radar, const RcsModel& model) {
    DetectionPoint out;
    out.range_m = range(state, radar);
    if (std::holds_alternative<ConstantRcs>(model)) {
        out.sigma_r = rcs_value(model, AspectAngles{});
    } else {
        out.sigma_r = rcs_value(model, aspect_angles(radar_in_body(state, radar)));
    }
    out.snr = snr(radar, out.sigma_r, out.range_m);
    out.w = std::sqrt(-std::log(radar.p_fa)) - std::sqrt(out.snr + 0.5);
    out.p_d = probability_of_detection(out.snr, radar.p_fa);
    return out;
}

}  // namespace radsense
