#include "radsense/rcs.hpp"

#include <cmath>
#include <numbers>

namespace radsense {

const char* model_name(const RcsModel& model) {
    if (std::holds_alternative<ConstantRcs>(model)) {
        return "constant";
    }
    if (std::holds_alternative<EllipsoidRcs>(model)) {
        return "ellipsoid";
    }
    return "spikeball";
}

void validate_model(const RcsModel& model) {
    if (const auto* c = std::get_if<ConstantRcs>(&model)) {
        if (!(c->c_c > 0.0) || !std::isfinite(c->c_c)) {
            throw ValidationError("constant RCS c_c must be positive");
        }
        return;
    }
    if (const auto* e = std::get_if<EllipsoidRcs>(&model)) {
        if (!(e->a > 0.0 && e->b > 0.0 && e->c > 0.0) ||
            !std::isfinite(e->a + e->b + e->c)) {
            throw ValidationError("ellipsoid semi-axes must be positive");
        }
        return;
    }
    const auto& s = std::get<SpikeballRcs>(model);
    if (!(s.a_s >= 0.0) || !std::isfinite(s.a_s)) {
        throw ValidationError("spikeball lobe amplitude a_s must be >= 0");
    }
    if (!(s.b_s > 0.0) || !std::isfinite(s.b_s)) {
        throw ValidationError("spikeball floor b_s must be positive");
    }
    if (s.n < 1) {
        throw ValidationError("spikeball lobe count n must be >= 1");
    }
}

std::vector<std::string> model_warnings(const RcsModel& model) {
    std::vector<std::string> warnings;
    if (const auto* s = std::get_if<SpikeballRcs>(&model)) {
        if (s->n % 2 != 0) {
            warnings.push_back(
                "spikeball lobe count n is odd; the pattern is not fore-aft "
                "symmetric");
        }
    }
    return warnings;
}

double rcs_value(const RcsModel& model, const AspectAngles& angles) {
    if (const auto* c = std::get_if<ConstantRcs>(&model)) {
        return c->c_c;
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
        return std::numbers::pi * abc * abc / (d * d);
    }
    const auto& s = std::get<SpikeballRcs>(model);
    return std::abs(s.a_s * std::sin(0.5 * s.n * angles.lambda)) + s.b_s;
}

}  // namespace radsense
