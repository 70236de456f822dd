#pragma once

#include <string>
#include <variant>
#include <vector>

#include "radsense/geometry.hpp"

namespace radsense {

/// Aspect-independent RCS of c_c square meters.
struct ConstantRcs {
    double c_c = 0.2;
};

/// Ellipsoidal scatterer with semi-axes a, b, c in meters (nose, wing, and
/// belly directions).
struct EllipsoidRcs {
    double a = 0.25;
    double b = 0.15;
    double c = 0.17;
};

/// Azimuth-modulated sphere: n lobes of amplitude a_s on a floor of b_s
/// square meters. Elevation-independent.
struct SpikeballRcs {
    double a_s = 0.2;
    double b_s = 0.15;
    int n = 4;
};

using RcsModel = std::variant<ConstantRcs, EllipsoidRcs, SpikeballRcs>;

/// Short lowercase name of the model alternative.
const char* model_name(const RcsModel& model);

/// Throws ValidationError if the model parameters violate their invariants
/// (positive axes and floors, nonnegative lobe amplitude, n >= 1).
void validate_model(const RcsModel& model);

/// Non-fatal advisories, e.g. an odd spikeball lobe count, which breaks
/// fore-aft symmetry.
std::vector<std::string> model_warnings(const RcsModel& model);

/// Radar cross section (m^2) of the model at the given aspect angles.
double rcs_value(const RcsModel& model, const AspectAngles& angles);

}  // namespace radsense
