#include "radsense/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace radsense {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

/// Linear-interpolation quantile of a sorted sample (the common "type 7"
/// definition).
double sorted_quantile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) {
        return sorted.front();
    }
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

UncertaintyLevel UncertaintyLevel::low() {
    return {0.1, 0.1 * kDegToRad, Label::low};
}

UncertaintyLevel UncertaintyLevel::medium() {
    return {10.0, 1.0 * kDegToRad, Label::medium};
}

UncertaintyLevel UncertaintyLevel::high() {
    return {100.0, 2.0 * kDegToRad, Label::high};
}

const char* level_name(UncertaintyLevel::Label label) {
    switch (label) {
        case UncertaintyLevel::Label::low:
            return "low";
        case UncertaintyLevel::Label::medium:
            return "medium";
        case UncertaintyLevel::Label::high:
            return "high";
        default:
            return "custom";
    }
}

std::vector<UncertaintyLevel> default_levels() {
    return {UncertaintyLevel::low(), UncertaintyLevel::medium(),
            UncertaintyLevel::high()};
}

AircraftState sample_perturbed_state(const AircraftState& nominal,
                                     const UncertaintyLevel& level,
                                     Xoshiro256PlusPlus& rng) {
    const NormalPair pos_ne = box_muller(rng);
    const NormalPair pos_d_roll = box_muller(rng);
    const NormalPair pitch_yaw = box_muller(rng);
    return {nominal.p_an + level.sigma_pa * pos_ne.z0,
            nominal.p_ae + level.sigma_pa * pos_ne.z1,
            nominal.p_ad + level.sigma_pa * pos_d_roll.z0,
            nominal.phi_a + level.sigma_ang * pos_d_roll.z1,
            nominal.theta_a + level.sigma_ang * pitch_yaw.z0,
            nominal.psi_a + level.sigma_ang * pitch_yaw.z1};
}

EnsembleResult run_ensemble(const SweepSpec& sweep, const RadarSite& radar,
                            const RcsModel& model,
                            const UncertaintyLevel& level, std::size_t runs,
                            std::uint64_t seed) {
    if (runs < 1) {
        throw ValidationError("ensemble needs at least one run");
    }
    validate_model(model);
    const std::size_t count = sweep_point_count(sweep);

    EnsembleResult out;
    out.run_count = runs;
    out.rng_seed = seed;
    out.theta_r_deg.resize(count);
    out.nominal_pd.resize(count);
    out.mc_pd.resize(static_cast<Eigen::Index>(runs),
                     static_cast<Eigen::Index>(count));

    std::vector<AircraftState> nominals;
    nominals.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        nominals.push_back(nominal_state_at(sweep, k));
        out.theta_r_deg[k] = sweep_theta_deg(sweep, k);
        out.nominal_pd[k] = evaluate_point(nominals[k], radar, model).p_d;
    }

    constexpr int kMaxRedraws = 128;
    for (std::size_t i = 0; i < runs; ++i) {
        Xoshiro256PlusPlus rng(derive_stream_seed(seed, i));
        for (std::size_t k = 0; k < count; ++k) {
            double p_d = 0.0;
            int attempt = 0;
            for (;; ++attempt) {
                const AircraftState perturbed =
                    sample_perturbed_state(nominals[k], level, rng);
                try {
                    p_d = evaluate_point(perturbed, radar, model).p_d;
                    break;
                } catch (const NadirSingularity&) {
                    if (attempt + 1 >= kMaxRedraws) {
                        throw;
                    }
                    ++out.resample_count;
                }
            }
            out.mc_pd(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(k)) = p_d;
        }
    }

    out.ensemble_mean.resize(count);
    out.ensemble_std.resize(count);
    out.ensemble_min.resize(count);
    out.ensemble_max.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const auto col = out.mc_pd.col(static_cast<Eigen::Index>(k));
        const double mean = col.mean();
        out.ensemble_mean[k] = mean;
        out.ensemble_min[k] = col.minCoeff();
        out.ensemble_max[k] = col.maxCoeff();
        if (runs > 1) {
            const double ss = (col.array() - mean).square().sum();
            out.ensemble_std[k] = std::sqrt(ss / static_cast<double>(runs - 1));
        } else {
            out.ensemble_std[k] = 0.0;
        }
    }
    return out;
}

CoverageReport coverage_check(const EnsembleResult& result,
                              const std::vector<double>& sigma_pd_per_k) {
    const std::size_t count = result.theta_r_deg.size();
    if (sigma_pd_per_k.size() != count) {
        throw DimensionMismatch(
            "sigma_pd vector length " + std::to_string(sigma_pd_per_k.size()) +
            " does not match sweep length " + std::to_string(count));
    }
    CoverageReport report;
    report.per_k.resize(count);
    std::size_t hits_total = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const auto col = result.mc_pd.col(static_cast<Eigen::Index>(k));
        const double bound = 3.0 * sigma_pd_per_k[k];
        std::size_t hits = 0;
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (std::abs(col(i) - result.nominal_pd[k]) <= bound) {
                ++hits;
            }
        }
        report.per_k[k] =
            static_cast<double>(hits) / static_cast<double>(result.run_count);
        hits_total += hits;
        if (report.per_k[k] < report.worst) {
            report.worst = report.per_k[k];
            report.worst_index = k;
        }
    }
    report.aggregate = static_cast<double>(hits_total) /
                       static_cast<double>(result.run_count * count);
    return report;
}

HistogramComparison histogram_vs_gaussian(const EnsembleResult& result,
                                          std::size_t k_index,
                                          double sigma_pd) {
    const std::size_t count = result.theta_r_deg.size();
    if (k_index >= count) {
        throw IndexOutOfRange("histogram index " + std::to_string(k_index) +
                              " exceeds sweep length " + std::to_string(count));
    }
    const auto col = result.mc_pd.col(static_cast<Eigen::Index>(k_index));
    const std::size_t n = result.run_count;

    HistogramComparison out;
    out.k_index = k_index;
    out.theta_r_deg = result.theta_r_deg[k_index];
    out.nominal_pd = result.nominal_pd[k_index];
    out.sigma_pd = sigma_pd;

    std::vector<double> sorted(col.data(), col.data() + col.size());
    std::sort(sorted.begin(), sorted.end());

    double lo = std::max(0.0, sorted.front());
    double hi = std::min(1.0, sorted.back());
    if (!(hi > lo)) {
        const double pad = std::max(1e-12, std::abs(lo) * 1e-12);
        lo -= pad;
        hi += pad;
    }
    const double iqr =
        sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
    const double width =
        2.0 * iqr / std::cbrt(static_cast<double>(n));
    std::size_t bins = 1;
    if (width > 0.0) {
        bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
        bins = std::clamp<std::size_t>(bins, 1, 10000);
    }

    out.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        out.bin_edges[i] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    }
    out.density.assign(bins, 0.0);
    const double bin_width = (hi - lo) / static_cast<double>(bins);
    std::size_t inside = 0;
    for (double v : sorted) {
        if (v < lo || v > hi) {
            continue;
        }
        auto bin = static_cast<std::size_t>((v - lo) / bin_width);
        bin = std::min(bin, bins - 1);
        out.density[bin] += 1.0;
        ++inside;
    }
    if (inside > 0) {
        for (double& d : out.density) {
            d /= static_cast<double>(inside) * bin_width;
        }
    }

    out.gaussian_density.assign(bins, 0.0);
    if (sigma_pd > 0.0) {
        const double norm =
            1.0 / (sigma_pd * std::sqrt(2.0 * std::numbers::pi));
        for (std::size_t i = 0; i < bins; ++i) {
            const double center = 0.5 * (out.bin_edges[i] + out.bin_edges[i + 1]);
            const double t = (center - out.nominal_pd) / sigma_pd;
            out.gaussian_density[i] = norm * std::exp(-0.5 * t * t);
        }
    }

    double mean = 0.0;
    for (double v : sorted) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : sorted) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);

    out.sample_mean = mean;
    out.sample_std =
        n > 1 ? std::sqrt(m2 * static_cast<double>(n) /
                          static_cast<double>(n - 1))
              : 0.0;
    out.mean_bias = mean - out.nominal_pd;
    if (n >= 3 && m2 > 0.0) {
        const double g1 = m3 / std::pow(m2, 1.5);
        const double nn = static_cast<double>(n);
        out.skewness = g1 * std::sqrt(nn * (nn - 1.0)) / (nn - 2.0);
    }
    return out;
}

}  // namespace radsense
