#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "radsense/scenario.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string theta_label(double theta_deg) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", theta_deg);
    std::string label(buf);
    for (char& c : label) {
        if (c == '.') {
            c = 'p';
        } else if (c == '-') {
            c = 'm';
        }
    }
    return label;
}

radsense::ScenarioConfig load_scenario(const std::string& config_path,
                                       const std::string& model_override) {
    radsense::ScenarioConfig config = config_path.empty()
                                          ? radsense::default_config()
                                          : radsense::load_config(config_path);
    if (!model_override.empty() &&
        model_override != radsense::model_name(config.model)) {
        if (model_override == "constant") {
            config.model = radsense::ConstantRcs{};
        } else if (model_override == "ellipsoid") {
            config.model = radsense::EllipsoidRcs{};
        } else if (model_override == "spikeball") {
            config.model = radsense::SpikeballRcs{};
        } else {
            throw radsense::ValidationError(
                "--model must be constant, ellipsoid, or spikeball");
        }
    }
    return config;
}

void filter_level(radsense::ScenarioConfig& config, const std::string& name) {
    if (name.empty()) {
        return;
    }
    std::vector<radsense::UncertaintyLevel> kept;
    for (const radsense::UncertaintyLevel& level : config.levels) {
        if (name == radsense::level_name(level.label)) {
            kept.push_back(level);
        }
    }
    if (kept.empty()) {
        throw radsense::ValidationError("no enabled level is named '" + name +
                                        "'");
    }
    config.levels = kept;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw radsense::Error("cannot write '" + path.string() + "'");
    }
    return out;
}

int run_eval(const radsense::ScenarioConfig& config, double theta_r_deg) {
    radsense::SweepSpec at = config.sweep;
    at.theta_r_start_deg = theta_r_deg;
    at.theta_r_end_deg = theta_r_deg;
    const radsense::AircraftState state = radsense::nominal_state_at(at, 0);

    json out;
    out["model"] = radsense::model_name(config.model);
    out["theta_r_deg"] = theta_r_deg;
    out["levels"] = json::array();
    for (const radsense::UncertaintyLevel& level : config.levels) {
        const radsense::DetectionAnalysis analysis =
            radsense::analyze_pose(state, config.radar, config.model, level);
        if (out["levels"].empty()) {
            out["state"] = {{"p_an_m", analysis.state.p_an},
                            {"p_ae_m", analysis.state.p_ae},
                            {"p_ad_m", analysis.state.p_ad},
                            {"phi_a_rad", analysis.state.phi_a},
                            {"theta_a_rad", analysis.state.theta_a},
                            {"psi_a_rad", analysis.state.psi_a}};
            out["range_m"] = analysis.point.range_m;
            out["lambda_rad"] = analysis.lambda;
            out["phi_rad"] = analysis.phi;
            out["sigma_r_m2"] = analysis.point.sigma_r;
            out["snr"] = analysis.point.snr;
            out["w"] = analysis.point.w;
            out["p_d"] = analysis.point.p_d;
            out["a_p"] = std::vector<double>(
                analysis.jacobian.a_p.data(), analysis.jacobian.a_p.data() + 6);
            out["flags"] = {
                {"near_nadir", analysis.jacobian.near_nadir},
                {"near_gimbal_lock", analysis.jacobian.near_gimbal_lock},
                {"near_rcs_corner", analysis.jacobian.near_rcs_corner}};
        }
        out["levels"].push_back(
            {{"label", radsense::level_name(level.label)},
             {"sigma_pa_m", level.sigma_pa},
             {"sigma_ang_rad", level.sigma_ang},
             {"c_pd", analysis.c_pd},
             {"sigma_pd", analysis.sigma_pd},
             {"three_sigma_pd", 3.0 * analysis.sigma_pd}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_sweep(const radsense::ScenarioConfig& config,
              const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const radsense::LinearSweepResult result = radsense::linear_sweep(config);
    const std::string model = radsense::model_name(config.model);

    for (std::size_t li = 0; li < result.levels.size(); ++li) {
        const std::string level = radsense::level_name(result.levels[li].label);
        std::ofstream out = open_output(std::filesystem::path(out_dir) /
                                        ("sweep_" + model + "_" + level +
                                         ".csv"));
        out << "theta_r_deg,range_m,lambda_rad,phi_rad,sigma_r_m2,snr,w,p_d,"
               "a_p_pn,a_p_pe,a_p_pd,a_p_phi,a_p_theta,a_p_psi,"
               "c_pd,sigma_pd,three_sigma_pd,"
               "near_nadir,near_gimbal_lock,near_rcs_corner\n";
        for (const radsense::DetectionAnalysis& row : result.rows[li]) {
            out << fmt(row.theta_r_deg) << ',' << fmt(row.point.range_m) << ','
                << fmt(row.lambda) << ',' << fmt(row.phi) << ','
                << fmt(row.point.sigma_r) << ',' << fmt(row.point.snr) << ','
                << fmt(row.point.w) << ',' << fmt(row.point.p_d);
            for (int j = 0; j < 6; ++j) {
                out << ',' << fmt(row.jacobian.a_p(j));
            }
            out << ',' << fmt(row.c_pd) << ',' << fmt(row.sigma_pd) << ','
                << fmt(3.0 * row.sigma_pd) << ','
                << (row.jacobian.near_nadir ? 1 : 0) << ','
                << (row.jacobian.near_gimbal_lock ? 1 : 0) << ','
                << (row.jacobian.near_rcs_corner ? 1 : 0) << '\n';
        }
    }
    std::cout << "wrote " << result.levels.size() << " sweep file(s) to "
              << out_dir << "\n";
    return 0;
}

int run_montecarlo(const radsense::ScenarioConfig& config,
                   const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const radsense::ValidationReport report = radsense::validate_sweep(config);
    const std::string model = radsense::model_name(config.model);

    for (std::size_t li = 0; li < report.ensembles.size(); ++li) {
        const radsense::EnsembleSummary& summary = report.ensembles[li];
        const std::string level = radsense::level_name(summary.level.label);
        const std::string tag = model + "_" + level;
        const radsense::EnsembleResult& ens = summary.ensemble;
        const std::size_t count = ens.theta_r_deg.size();

        {
            std::ofstream out = open_output(std::filesystem::path(out_dir) /
                                            ("ensemble_" + tag + ".csv"));
            out << "run,theta_r_deg,p_d\n";
            for (std::size_t i = 0; i < ens.run_count; ++i) {
                for (std::size_t k = 0; k < count; ++k) {
                    out << i << ',' << fmt(ens.theta_r_deg[k]) << ','
                        << fmt(ens.mc_pd(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(k)))
                        << '\n';
                }
            }
        }
        {
            std::ofstream out = open_output(std::filesystem::path(out_dir) /
                                            ("coverage_" + tag + ".csv"));
            out << "theta_r_deg,nominal_pd,sigma_pd,within_3sigma_fraction\n";
            for (std::size_t k = 0; k < count; ++k) {
                out << fmt(ens.theta_r_deg[k]) << ',' << fmt(ens.nominal_pd[k])
                    << ',' << fmt(report.linear.rows[li][k].sigma_pd) << ','
                    << fmt(summary.coverage.per_k[k]) << '\n';
            }
        }
        for (const radsense::HistogramComparison& hist : summary.histograms) {
            std::ofstream out = open_output(
                std::filesystem::path(out_dir) /
                ("histogram_" + tag + "_theta_" +
                 theta_label(hist.theta_r_deg) + ".csv"));
            out << "bin_lo,bin_hi,density,gaussian_density\n";
            for (std::size_t i = 0; i < hist.density.size(); ++i) {
                out << fmt(hist.bin_edges[i]) << ',' << fmt(hist.bin_edges[i + 1])
                    << ',' << fmt(hist.density[i]) << ','
                    << fmt(hist.gaussian_density[i]) << '\n';
            }
        }
        {
            std::ofstream out = open_output(std::filesystem::path(out_dir) /
                                            ("summary_" + tag + ".txt"));
            out << "model " << model << "\nlevel " << level << "\nruns "
                << ens.run_count << "\nseed " << ens.rng_seed
                << "\nresamples " << ens.resample_count
                << "\naggregate_3sigma_coverage " << fmt(summary.coverage.aggregate)
                << "\nworst_k_coverage " << fmt(summary.coverage.worst)
                << "\nworst_k_theta_deg "
                << fmt(ens.theta_r_deg[summary.coverage.worst_index])
                << "\nmax_abs_deviation " << fmt(summary.max_abs_deviation)
                << "\nmax_abs_deviation_theta_deg "
                << fmt(ens.theta_r_deg[summary.max_deviation_k]) << "\n";
            for (const radsense::HistogramComparison& hist :
                 summary.histograms) {
                out << "histogram_theta_" << theta_label(hist.theta_r_deg)
                    << "_skewness " << fmt(hist.skewness) << "\n"
                    << "histogram_theta_" << theta_label(hist.theta_r_deg)
                    << "_mean_bias " << fmt(hist.mean_bias) << "\n";
            }
        }
    }
    std::cout << "wrote Monte Carlo results for " << report.ensembles.size()
              << " level(s) to " << out_dir << "\n";
    return 0;
}

int run_gradcheck(const radsense::ScenarioConfig& config, std::size_t samples,
                  std::uint64_t seed) {
    const radsense::GradcheckReport report =
        radsense::gradcheck(config, samples, seed);
    std::cout << "gradcheck: model=" << report.model
              << " samples=" << report.samples << " seed=" << seed << "\n";
    for (const radsense::BlockCheck& block : report.blocks) {
        std::printf("  %-18s max_err=%.3e\n", block.name.c_str(),
                    block.max_err);
    }
    std::cout << "  excluded: nadir=" << report.excluded_nadir
              << " gimbal=" << report.excluded_gimbal
              << " corner=" << report.excluded_corner << "\n";
    std::printf("  worst=%.3e tolerance=%.1e => %s\n", report.worst(),
                report.tolerance, report.pass() ? "PASS" : "FAIL");
    return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "single-pulse radar detection probability with first-order "
        "pose-uncertainty propagation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string model_override;
    app.add_option("--config", config_path, "scenario configuration file");
    app.add_option("--model", model_override,
                   "override the RCS model (constant, ellipsoid, spikeball); "
                   "parameters fall back to the model defaults unless the "
                   "configured type already matches");

    CLI::App* eval = app.add_subcommand(
        "eval", "evaluate one sweep bearing and print JSON");
    eval->fallthrough();
    double theta_r_deg = 0.0;
    bool theta_set = false;
    eval->add_option("--theta-r", theta_r_deg, "bearing in degrees")
        ->each([&theta_set](const std::string&) { theta_set = true; });

    CLI::App* sweep = app.add_subcommand(
        "sweep", "first-order sweep, one CSV per uncertainty level");
    sweep->fallthrough();
    std::string sweep_out;
    sweep->add_option("--out", sweep_out, "output directory")->required();

    CLI::App* montecarlo = app.add_subcommand(
        "montecarlo", "Monte Carlo ensembles, coverage, and histograms");
    montecarlo->fallthrough();
    std::string mc_out;
    std::uint64_t mc_runs = 0;
    std::uint64_t mc_seed = 0;
    bool runs_set = false;
    bool seed_set = false;
    montecarlo->add_option("--out", mc_out, "output directory")->required();
    montecarlo->add_option("--runs", mc_runs, "number of Monte Carlo runs")
        ->each([&runs_set](const std::string&) { runs_set = true; });
    montecarlo->add_option("--seed", mc_seed, "ensemble RNG seed")
        ->each([&seed_set](const std::string&) { seed_set = true; });
    std::string mc_level;
    montecarlo->add_option("--level", mc_level,
                           "restrict to one enabled uncertainty level");

    CLI::App* gradcheck = app.add_subcommand(
        "gradcheck", "finite-difference audit of the Jacobian chain");
    gradcheck->fallthrough();
    std::uint64_t gc_samples = 1000;
    std::uint64_t gc_seed = 42;
    gradcheck->add_option("--samples", gc_samples, "number of random poses");
    gradcheck->add_option("--seed", gc_seed, "pose sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        radsense::ScenarioConfig config =
            load_scenario(config_path, model_override);
        if (eval->parsed()) {
            if (!theta_set) {
                theta_r_deg = config.sweep.theta_r_start_deg;
            }
            return run_eval(config, theta_r_deg);
        }
        if (sweep->parsed()) {
            return run_sweep(config, sweep_out);
        }
        if (montecarlo->parsed()) {
            filter_level(config, mc_level);
            if (runs_set) {
                if (mc_runs < 1) {
                    throw radsense::ValidationError("--runs must be >= 1");
                }
                config.mc_runs = static_cast<std::size_t>(mc_runs);
            }
            if (seed_set) {
                config.mc_seed = mc_seed;
            }
            return run_montecarlo(config, mc_out);
        }
        if (gradcheck->parsed()) {
            return run_gradcheck(config, static_cast<std::size_t>(gc_samples),
                                 gc_seed);
        }
    } catch (const radsense::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const radsense::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const radsense::InvalidPfa& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
