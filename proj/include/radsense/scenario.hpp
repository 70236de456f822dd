#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radsense/jacobians.hpp"
#include "radsense/montecarlo.hpp"
#include "radsense/sweep.hpp"

namespace radsense {

/// Complete scenario: radar site, RCS model, sweep geometry, uncertainty
/// levels, and Monte Carlo settings.
struct ScenarioConfig {
    RadarSite radar;
    RcsModel model = ConstantRcs{};
    SweepSpec sweep;
    std::vector<UncertaintyLevel> levels = default_levels();
    std::size_t mc_runs = 1000;
    std::uint64_t mc_seed = 555;
    std::vector<std::string> warnings;
};

/// The configuration every key defaults to; equal to parsing an empty file.
ScenarioConfig default_config();

/// Parses `key = value` lines (dotted sections, '#' comments). Unknown keys
/// and malformed values throw ParseError with the offending line; violated
/// invariants throw ValidationError.
ScenarioConfig parse_config(const std::string& text);

/// Reads and parses a configuration file. Throws ParseError when the file
/// cannot be opened.
ScenarioConfig load_config(const std::string& path);

/// Detection chain, Jacobian, and propagated uncertainty at one pose for one
/// uncertainty level.
struct DetectionAnalysis {
    double theta_r_deg = 0.0;
    AircraftState state;
    DetectionPoint point;
    double lambda = 0.0;  ///< aspect azimuth (rad); NaN if never computed
    double phi = 0.0;     ///< aspect elevation (rad); NaN if never computed
    PdJacobian jacobian;
    double c_pd = 0.0;
    double sigma_pd = 0.0;
};

/// Evaluates one pose under one uncertainty level.
DetectionAnalysis analyze_pose(const AircraftState& state,
                               const RadarSite& radar, const RcsModel& model,
                               const UncertaintyLevel& level);

/// First-order sweep: rows[level][k] analyzes sweep point k under
/// levels[level].
struct LinearSweepResult {
    std::vector<UncertaintyLevel> levels;
    std::vector<double> theta_r_deg;
    std::vector<std::vector<DetectionAnalysis>> rows;
};

LinearSweepResult linear_sweep(const ScenarioConfig& config);

/// Monte Carlo validation of one uncertainty level against the linear
/// propagation.
struct EnsembleSummary {
    UncertaintyLevel level;
    EnsembleResult ensemble;
    CoverageReport coverage;
    std::vector<HistogramComparison> histograms;
    double max_abs_deviation = 0.0;  ///< max |P_D - nominal| over runs and k
    std::size_t max_deviation_k = 0;
};

/// Full validation: the linear sweep plus an ensemble, coverage report, and
/// histogram comparisons (at histogram_theta_deg bearings) per level.
struct ValidationReport {
    LinearSweepResult linear;
    std::vector<EnsembleSummary> ensembles;
    std::vector<double> histogram_theta_deg;
};

ValidationReport validate_sweep(const ScenarioConfig& config,
                                std::vector<double> histogram_theta_deg = {
                                    2.0, 20.0});

/// Central-difference step sizes used by gradcheck and the test suite.
struct FdSteps {
    double position_m = 1e-2;
    double angle_rad = 1e-6;
    double relative = 1e-6;
};

/// Absolute floor of the finite-difference comparison for O(1) forward
/// functions.
inline constexpr double kFdAbsoluteFloor = 1e-8;

/// Headroom multiplier on the rounding noise eps * |f| / (2h) that a central
/// difference of a function of magnitude |f| cannot resolve below.
inline constexpr double kFdNoiseGuard = 8.0;

/// Normalized finite-difference error: fd_error(...) < rel_tol is the test
///   |analytic - fd| <= max(rel_tol * |fd|, floor),
///   floor = max(kFdAbsoluteFloor, kFdNoiseGuard * eps * f_scale / (2h)),
/// where f_scale is the magnitude of the differenced forward values and h
/// the step. For forward functions of magnitude <= ~1e5 the floor is the
/// plain kFdAbsoluteFloor.
double fd_error(double analytic, double fd, double f_scale, double h,
                double rel_tol);

struct BlockCheck {
    std::string name;
    double max_err = 0.0;
};

/// Finite-difference audit of the Jacobian chain at random valid poses.
struct GradcheckReport {
    std::string model;
    std::vector<BlockCheck> blocks;  ///< per block plus the assembled row
    double tolerance = 1e-6;
    std::size_t samples = 0;
    std::size_t excluded_nadir = 0;
    std::size_t excluded_gimbal = 0;
    std::size_t excluded_corner = 0;

    double worst() const;
    bool pass() const;
};

/// Samples random poses around the configured radar (ranges 10 km to
/// 1000 km, attitudes within 60 degrees), compares every Jacobian block and
/// the assembled row against central differences, and reports the largest
/// error per block. Poses whose conditioning flags fire, or that sit within
/// the finite-difference footprint of a spikeball corner, are excluded and
/// counted.
GradcheckReport gradcheck(const ScenarioConfig& config, std::size_t samples,
                          std::uint64_t seed);

}  // namespace radsense
