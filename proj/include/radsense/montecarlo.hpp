#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "radsense/detection.hpp"
#include "radsense/rng.hpp"
#include "radsense/sweep.hpp"

namespace radsense {

/// Pose uncertainty: independent per-axis position noise of sigma_pa meters
/// and per-angle attitude noise of sigma_ang radians.
struct UncertaintyLevel {
    enum class Label { low, medium, high, custom };

    double sigma_pa = 0.0;
    double sigma_ang = 0.0;
    Label label = Label::custom;

    static UncertaintyLevel low();
    static UncertaintyLevel medium();
    static UncertaintyLevel high();
};

const char* level_name(UncertaintyLevel::Label label);

/// Bundled low/medium/high trio.
std::vector<UncertaintyLevel> default_levels();

/// Draws one perturbed pose. Consumes exactly six normal deviates (three
/// Box-Muller pairs) in the order north, east, down, roll, pitch, yaw, so a
/// zero level reproduces the nominal pose while advancing the generator the
/// same amount as any other level.
AircraftState sample_perturbed_state(const AircraftState& nominal,
                                     const UncertaintyLevel& level,
                                     Xoshiro256PlusPlus& rng);

/// Monte Carlo detection probabilities over a sweep.
struct EnsembleResult {
    std::vector<double> theta_r_deg;
    std::vector<double> nominal_pd;
    Eigen::MatrixXd mc_pd;  ///< run_count x point_count
    std::vector<double> ensemble_mean;
    std::vector<double> ensemble_std;  ///< sample standard deviation
    std::vector<double> ensemble_min;
    std::vector<double> ensemble_max;
    std::size_t run_count = 0;
    std::uint64_t rng_seed = 0;
    std::size_t resample_count = 0;
};

/// Runs `runs` independent sweeps of perturbed poses. Run i draws from its
/// own substream seeded with derive_stream_seed(seed, i), so results are
/// independent of evaluation order. Perturbed poses that land on the nadir
/// singularity are redrawn within the run's stream and counted.
EnsembleResult run_ensemble(const SweepSpec& sweep, const RadarSite& radar,
                            const RcsModel& model,
                            const UncertaintyLevel& level, std::size_t runs,
                            std::uint64_t seed);

/// Fraction of runs whose deviation from the nominal stays within three
/// propagated standard deviations.
struct CoverageReport {
    std::vector<double> per_k;
    double aggregate = 1.0;
    double worst = 1.0;
    std::size_t worst_index = 0;
};

/// Compares |P_D - nominal| <= 3 sigma_pd per sweep point. Throws
/// DimensionMismatch unless sigma_pd_per_k matches the sweep length.
CoverageReport coverage_check(const EnsembleResult& result,
                              const std::vector<double>& sigma_pd_per_k);

/// Histogram of one sweep point's ensemble against the matching Gaussian.
struct HistogramComparison {
    std::size_t k_index = 0;
    double theta_r_deg = 0.0;
    double nominal_pd = 0.0;
    double sigma_pd = 0.0;
    std::vector<double> bin_edges;         ///< bin_count + 1 ascending edges
    std::vector<double> density;           ///< per bin, integrates to one
    std::vector<double> gaussian_density;  ///< Gaussian pdf at bin centers
    double sample_mean = 0.0;
    double sample_std = 0.0;
    double skewness = 0.0;   ///< adjusted Fisher-Pearson
    double mean_bias = 0.0;  ///< sample mean minus nominal
};

/// Bins column k_index with the Freedman-Diaconis rule, support clipped to
/// [0, 1], and evaluates the Gaussian N(nominal, sigma_pd^2) alongside.
HistogramComparison histogram_vs_gaussian(const EnsembleResult& result,
                                          std::size_t k_index,
                                          double sigma_pd);

}  // namespace radsense
