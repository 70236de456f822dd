#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>
#include <variant>

#include "radsense/scenario.hpp"

using namespace radsense;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = kPi / 180.0;

}  // namespace

TEST_CASE("default configuration equals parsing an empty document") {
    const ScenarioConfig base = default_config();
    const ScenarioConfig parsed = parse_config("");

    for (const ScenarioConfig* config : {&base, &parsed}) {
        CHECK(config->radar.p_rn == 0.0);
        CHECK(config->radar.p_re == 0.0);
        CHECK(config->radar.p_rd == 0.0);
        CHECK(config->radar.c_r == 167.4);
        CHECK(config->radar.p_fa == 1.7e-4);
        REQUIRE(std::holds_alternative<ConstantRcs>(config->model));
        CHECK(std::get<ConstantRcs>(config->model).c_c == 0.2);
        CHECK(config->sweep.theta_r_start_deg == 0.0);
        CHECK(config->sweep.theta_r_end_deg == 180.0);
        CHECK(config->sweep.theta_r_step_deg == 0.5);
        CHECK(config->sweep.range_m == 650000.0);
        CHECK(config->sweep.down_m == -3000.0);
        CHECK(config->sweep.heading_rad == 0.0);
        REQUIRE(config->levels.size() == 3);
        CHECK(config->levels[0].label == UncertaintyLevel::Label::low);
        CHECK(config->levels[0].sigma_pa == UncertaintyLevel::low().sigma_pa);
        CHECK(config->levels[1].sigma_pa ==
              UncertaintyLevel::medium().sigma_pa);
        CHECK(config->levels[2].sigma_ang ==
              UncertaintyLevel::high().sigma_ang);
        CHECK(config->mc_runs == 1000);
        CHECK(config->mc_seed == 555);
        CHECK(config->warnings.empty());
    }
}

TEST_CASE("every configuration key round-trips") {
    const std::string text =
        "# radar site\n"
        "radar.position_n_m = 100.0\n"
        "radar.position_e_m = -50.0\n"
        "radar.position_d_m = 2.5\n"
        "radar.c_r = 200.0\n"
        "radar.p_fa = 1e-5\n"
        "\n"
        "model.type = spikeball  # inline comment\n"
        "model.a_s = 0.3\n"
        "model.b_s = 0.1\n"
        "model.n = 6\n"
        "\n"
        "sweep.theta_r_start_deg = 10.0\n"
        "sweep.theta_r_end_deg = 90.0\n"
        "sweep.theta_r_step_deg = 2.0\n"
        "sweep.range_m = 400000.0\n"
        "sweep.down_m = -5000.0\n"
        "sweep.heading_deg = 45.0\n"
        "\n"
        "levels.enabled = low, custom\n"
        "levels.low.sigma_pa_m = 0.5\n"
        "levels.low.sigma_ang_deg = 0.2\n"
        "levels.custom.sigma_pa_m = 25.0\n"
        "levels.custom.sigma_ang_deg = 1.5\n"
        "\n"
        "mc.runs = 250\n"
        "mc.seed = 99\n";
    const ScenarioConfig config = parse_config(text);

    CHECK(config.radar.p_rn == 100.0);
    CHECK(config.radar.p_re == -50.0);
    CHECK(config.radar.p_rd == 2.5);
    CHECK(config.radar.c_r == 200.0);
    CHECK(config.radar.p_fa == 1e-5);

    REQUIRE(std::holds_alternative<SpikeballRcs>(config.model));
    const SpikeballRcs& model = std::get<SpikeballRcs>(config.model);
    CHECK(model.a_s == 0.3);
    CHECK(model.b_s == 0.1);
    CHECK(model.n == 6);
    CHECK(config.warnings.empty());

    CHECK(config.sweep.theta_r_start_deg == 10.0);
    CHECK(config.sweep.theta_r_end_deg == 90.0);
    CHECK(config.sweep.theta_r_step_deg == 2.0);
    CHECK(config.sweep.range_m == 400000.0);
    CHECK(config.sweep.down_m == -5000.0);
    CHECK(config.sweep.heading_rad == 45.0 * kDegToRad);

    REQUIRE(config.levels.size() == 2);
    CHECK(config.levels[0].label == UncertaintyLevel::Label::low);
    CHECK(config.levels[0].sigma_pa == 0.5);
    CHECK(config.levels[0].sigma_ang == 0.2 * kDegToRad);
    CHECK(config.levels[1].label == UncertaintyLevel::Label::custom);
    CHECK(config.levels[1].sigma_pa == 25.0);
    CHECK(config.levels[1].sigma_ang == 1.5 * kDegToRad);

    CHECK(config.mc_runs == 250);
    CHECK(config.mc_seed == 99);
}

TEST_CASE("ellipsoid model keys round-trip") {
    const ScenarioConfig config = parse_config(
        "model.type = ellipsoid\n"
        "model.a = 0.30\n"
        "model.b = 0.20\n"
        "model.c = 0.10\n");
    REQUIRE(std::holds_alternative<EllipsoidRcs>(config.model));
    const EllipsoidRcs& model = std::get<EllipsoidRcs>(config.model);
    CHECK(model.a == 0.30);
    CHECK(model.b == 0.20);
    CHECK(model.c == 0.10);
}

TEST_CASE("comments and whitespace are ignored") {
    const ScenarioConfig config = parse_config(
        "# full-line comment\n"
        "\n"
        "   \t\n"
        "  radar.c_r   =   180.0   # trailing comment\n"
        "#mc.runs = 7\n");
    CHECK(config.radar.c_r == 180.0);
    CHECK(config.mc_runs == 1000);
}

TEST_CASE("parse errors carry the line number and the offending token") {
    CHECK_THROWS_WITH_AS(parse_config("\nradar.nonsense = 1.0\n"),
                         "line 2: unknown key 'radar.nonsense'", ParseError);
    CHECK_THROWS_WITH_AS(parse_config("mc.runs = 5\nmc.runs = 6\n"),
                         "line 2: duplicate key 'mc.runs'", ParseError);
    CHECK_THROWS_WITH_AS(
        parse_config("radar.c_r = banana\n"),
        "line 1: invalid number 'banana' for key 'radar.c_r'", ParseError);
    CHECK_THROWS_WITH_AS(parse_config("radar.c_r 200\n"),
                         "line 1: expected 'key = value', got 'radar.c_r 200'",
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_config("radar.c_r =\n"),
                         "line 1: expected 'key = value', got 'radar.c_r ='",
                         ParseError);
    CHECK_THROWS_AS(parse_config("model.type = cube\n"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_config("model.type = cube\n"),
        "line 1: model.type must be constant, ellipsoid, or spikeball, got "
        "'cube'",
        ParseError);
    CHECK_THROWS_AS(parse_config("mc.seed = -1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("mc.runs = 3.5\n"), ParseError);
    CHECK_THROWS_AS(parse_config("radar.c_r = 1e999\n"), ParseError);
}

TEST_CASE("validation errors reject inconsistent configurations") {
    CHECK_THROWS_AS(parse_config("sweep.theta_r_step_deg = -1.0\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config("sweep.theta_r_step_deg = 0.0\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config("sweep.range_m = 0.0\n"), ValidationError);
    CHECK_THROWS_AS(
        parse_config("sweep.theta_r_start_deg = 90\nsweep.theta_r_end_deg = "
                     "10\n"),
        ValidationError);

    CHECK_THROWS_WITH_AS(
        parse_config("model.type = spikeball\nmodel.n = 3\n"),
        "model.n must be an even integer >= 2 in configuration",
        ValidationError);
    CHECK_THROWS_AS(parse_config("model.type = spikeball\nmodel.n = 0\n"),
                    ValidationError);

    CHECK_THROWS_WITH_AS(parse_config("model.a = 0.3\n"),
                         "'model.a' does not apply to the constant model",
                         ValidationError);
    CHECK_THROWS_WITH_AS(
        parse_config("model.type = ellipsoid\nmodel.c_c = 0.1\n"),
        "'model.c_c' does not apply to the ellipsoid model", ValidationError);
    CHECK_THROWS_WITH_AS(
        parse_config("model.type = spikeball\nmodel.b = 0.1\n"),
        "'model.b' does not apply to the spikeball model", ValidationError);

    CHECK_THROWS_WITH_AS(parse_config("levels.enabled = low, extreme\n"),
                         "unknown level 'extreme' in levels.enabled",
                         ValidationError);
    CHECK_THROWS_WITH_AS(parse_config("levels.enabled = low, low\n"),
                         "level 'low' enabled more than once",
                         ValidationError);
    CHECK_THROWS_AS(parse_config("levels.enabled = custom\n"),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_config("levels.enabled = custom\n"
                     "levels.custom.sigma_pa_m = -1.0\n"
                     "levels.custom.sigma_ang_deg = 1.0\n"),
        ValidationError);

    CHECK_THROWS_AS(parse_config("mc.runs = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("model.type = ellipsoid\nmodel.a = 0.0\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config("radar.p_fa = 1.5\n"), InvalidPfa);
    CHECK_THROWS_AS(parse_config("radar.c_r = -1.0\n"), ValidationError);
}

TEST_CASE("load_config reads files and rejects missing ones") {
    namespace fs = std::filesystem;
    const fs::path path =
        fs::temp_directory_path() / "radsense_test_config.cfg";
    {
        std::ofstream out(path);
        out << "radar.c_r = 150.0\nmc.seed = 4242\n";
    }
    const ScenarioConfig config = load_config(path.string());
    CHECK(config.radar.c_r == 150.0);
    CHECK(config.mc_seed == 4242);
    std::remove(path.string().c_str());

    CHECK_THROWS_AS(load_config((fs::temp_directory_path() /
                                 "radsense_no_such_file.cfg")
                                    .string()),
                    ParseError);
}

TEST_CASE("sweep grids include both endpoints") {
    SweepSpec spec;
    CHECK(sweep_point_count(spec) == 361);
    CHECK(sweep_theta_deg(spec, 0) == 0.0);
    CHECK(sweep_theta_deg(spec, 1) == 0.5);
    CHECK(sweep_theta_deg(spec, 360) == 180.0);
    CHECK_THROWS_AS(sweep_theta_deg(spec, 361), IndexOutOfRange);
    CHECK_THROWS_AS(nominal_state_at(spec, 361), IndexOutOfRange);

    SweepSpec coarse;
    coarse.theta_r_start_deg = 0.0;
    coarse.theta_r_end_deg = 1.0;
    coarse.theta_r_step_deg = 0.3;
    CHECK(sweep_point_count(coarse) == 4);
    CHECK(sweep_theta_deg(coarse, 3) == doctest::Approx(0.9).epsilon(1e-15));

    SweepSpec single;
    single.theta_r_start_deg = 25.0;
    single.theta_r_end_deg = 25.0;
    single.theta_r_step_deg = 5.0;
    CHECK(sweep_point_count(single) == 1);
    CHECK(sweep_theta_deg(single, 0) == 25.0);
}

TEST_CASE("nominal sweep poses sit on the circle at constant attitude") {
    SweepSpec spec;
    spec.heading_rad = 0.25;

    const AircraftState north = nominal_state_at(spec, 0);
    CHECK(north.p_an == 0.0);
    CHECK(north.p_ae == spec.range_m);
    CHECK(north.p_ad == spec.down_m);
    CHECK(north.phi_a == 0.0);
    CHECK(north.theta_a == 0.0);
    CHECK(north.psi_a == 0.25);

    const AircraftState east = nominal_state_at(spec, 180);
    CHECK(east.p_an == doctest::Approx(spec.range_m).epsilon(1e-15));
    CHECK(std::abs(east.p_ae) < 1e-9);

    const AircraftState south = nominal_state_at(spec, 360);
    CHECK(std::abs(south.p_an) < 1e-9);
    CHECK(south.p_ae == -spec.range_m);

    const double radius = std::hypot(spec.range_m, spec.down_m);
    for (std::size_t k = 0; k < 361; k += 10) {
        const AircraftState s = nominal_state_at(spec, k);
        const double r = std::sqrt(s.p_an * s.p_an + s.p_ae * s.p_ae +
                                   s.p_ad * s.p_ad);
        CHECK(r == doctest::Approx(radius).epsilon(1e-15));
    }
}

TEST_CASE("analyze_pose composes the chain without modification") {
    const ScenarioConfig config = default_config();
    const RcsModel model = EllipsoidRcs{};
    const UncertaintyLevel level = UncertaintyLevel::medium();
    const AircraftState state = nominal_state_at(config.sweep, 40);

    const DetectionAnalysis analysis =
        analyze_pose(state, config.radar, model, level);

    const DetectionPoint point = evaluate_point(state, config.radar, model);
    CHECK(analysis.point.range_m == point.range_m);
    CHECK(analysis.point.sigma_r == point.sigma_r);
    CHECK(analysis.point.snr == point.snr);
    CHECK(analysis.point.p_d == point.p_d);

    const AspectAngles angles =
        aspect_angles(radar_in_body(state, config.radar));
    CHECK(analysis.lambda == angles.lambda);
    CHECK(analysis.phi == angles.phi);

    const PdJacobian jacobian = assemble_a_p(state, config.radar, model);
    for (int i = 0; i < 6; ++i) {
        CHECK(analysis.jacobian.a_p(0, i) == jacobian.a_p(0, i));
    }
    const PdVariance variance = propagate_variance(
        jacobian, PoseCovariance::from_sigmas(level.sigma_pa,
                                              level.sigma_ang));
    CHECK(analysis.c_pd == variance.c_pd);
    CHECK(analysis.sigma_pd == variance.sigma_pd);
    CHECK(analysis.sigma_pd == std::sqrt(analysis.c_pd));
}

TEST_CASE("analyze_pose reports no aspect angles for a constant model at "
          "nadir") {
    const ScenarioConfig config = default_config();
    const AircraftState state(0.0, 0.0, -3000.0, 0.0, 0.0, 0.0);

    const DetectionAnalysis analysis = analyze_pose(
        state, config.radar, ConstantRcs{}, UncertaintyLevel::low());
    CHECK(std::isnan(analysis.lambda));
    CHECK(std::isnan(analysis.phi));
    CHECK(std::isfinite(analysis.point.p_d));
    CHECK(std::isfinite(analysis.sigma_pd));

    CHECK_THROWS_AS(analyze_pose(state, config.radar, EllipsoidRcs{},
                                 UncertaintyLevel::low()),
                    NadirSingularity);
}

TEST_CASE("linear_sweep lays out one row per level") {
    ScenarioConfig config = parse_config(
        "model.type = ellipsoid\n"
        "sweep.theta_r_step_deg = 30.0\n");
    const LinearSweepResult result = linear_sweep(config);
    REQUIRE(result.levels.size() == 3);
    REQUIRE(result.theta_r_deg.size() == 7);
    REQUIRE(result.rows.size() == 3);
    for (const auto& row : result.rows) {
        REQUIRE(row.size() == 7);
    }
    for (std::size_t k = 0; k < 7; ++k) {
        CHECK(result.theta_r_deg[k] == 30.0 * static_cast<double>(k));
        CHECK(result.rows[0][k].theta_r_deg == result.theta_r_deg[k]);
        CHECK(result.rows[0][k].point.p_d == result.rows[1][k].point.p_d);
        CHECK(result.rows[0][k].sigma_pd <= result.rows[1][k].sigma_pd);
        CHECK(result.rows[1][k].sigma_pd <= result.rows[2][k].sigma_pd);
    }
}

TEST_CASE("doubling both sigmas doubles the propagated sigma exactly") {
    const std::string base =
        "model.type = ellipsoid\n"
        "sweep.theta_r_step_deg = 45.0\n"
        "levels.enabled = custom\n";
    const ScenarioConfig narrow = parse_config(
        base +
        "levels.custom.sigma_pa_m = 5.0\nlevels.custom.sigma_ang_deg = "
        "0.5\n");
    const ScenarioConfig wide = parse_config(
        base +
        "levels.custom.sigma_pa_m = 10.0\nlevels.custom.sigma_ang_deg = "
        "1.0\n");

    const LinearSweepResult a = linear_sweep(narrow);
    const LinearSweepResult b = linear_sweep(wide);
    REQUIRE(a.rows.size() == 1);
    REQUIRE(b.rows.size() == 1);
    REQUIRE(a.rows[0].size() == b.rows[0].size());
    for (std::size_t k = 0; k < a.rows[0].size(); ++k) {
        CHECK(b.rows[0][k].c_pd == 4.0 * a.rows[0][k].c_pd);
        CHECK(b.rows[0][k].sigma_pd == 2.0 * a.rows[0][k].sigma_pd);
    }
}

TEST_CASE("validate_sweep under zero uncertainty is exact everywhere") {
    const ScenarioConfig config = parse_config(
        "model.type = ellipsoid\n"
        "sweep.theta_r_step_deg = 30.0\n"
        "levels.enabled = custom\n"
        "levels.custom.sigma_pa_m = 0.0\n"
        "levels.custom.sigma_ang_deg = 0.0\n"
        "mc.runs = 40\n");
    const ValidationReport report = validate_sweep(config);

    REQUIRE(report.ensembles.size() == 1);
    const EnsembleSummary& summary = report.ensembles[0];
    CHECK(summary.coverage.aggregate == 1.0);
    CHECK(summary.coverage.worst == 1.0);
    CHECK(summary.max_abs_deviation == 0.0);
    CHECK(summary.ensemble.resample_count == 0);

    REQUIRE(report.histogram_theta_deg.size() == 2);
    CHECK(report.histogram_theta_deg[0] == 2.0);
    CHECK(report.histogram_theta_deg[1] == 20.0);
    REQUIRE(summary.histograms.size() == 2);
    CHECK(summary.histograms[0].theta_r_deg == 0.0);
    CHECK(summary.histograms[1].theta_r_deg == 30.0);
    CHECK(std::abs(summary.histograms[0].sample_std) < 1e-15);
    CHECK(std::abs(summary.histograms[0].mean_bias) < 1e-15);
}

TEST_CASE("fd_error reduces to a plain relative error away from the floors") {
    CHECK(fd_error(1.5, 1.5, 1.0, 1e-6, 1e-6) == 0.0);
    CHECK(fd_error(2.0, 1.5, 1.0, 1e-6, 1e-6) ==
          doctest::Approx(0.5 / 1.5).epsilon(1e-15));
    CHECK(fd_error(1.0 + 1e-7, 1.0, 1.0, 1e-6, 1e-6) ==
          doctest::Approx(1e-7).epsilon(1e-9));
}

TEST_CASE("fd_error floors protect small derivatives and large forwards") {
    CHECK(fd_error(1e-9, 0.0, 1.0, 1e-6, 1e-6) < 1e-6);
    CHECK(fd_error(5e-8, 0.0, 1e6, 1e-2, 1e-6) < 1e-6);
    CHECK(fd_error(5e-8, 0.0, 1.0, 1e-2, 1e-6) > 1e-6);

    const double eps = std::numeric_limits<double>::epsilon();
    const double noise_floor = kFdNoiseGuard * eps * 1e6 / (2.0 * 1e-2);
    REQUIRE(noise_floor > kFdAbsoluteFloor);
    CHECK(fd_error(5e-8, 0.0, 1e6, 1e-2, 1e-6) ==
          doctest::Approx(5e-8 / (noise_floor / 1e-6)).epsilon(1e-12));
}

TEST_CASE("gradcheck skips the aspect blocks for the constant model") {
    ScenarioConfig config = default_config();
    config.model = ConstantRcs{};
    const GradcheckReport report = gradcheck(config, 50, 1);

    CHECK(report.model == "constant");
    CHECK(report.samples == 50);
    REQUIRE(report.blocks.size() == 8);
    CHECK(report.blocks[0].name == "d_pd_d_snr");
    CHECK(report.blocks[4].name == "d_body_d_state");
    CHECK(report.blocks[5].name == "d_angles_d_body");
    CHECK(report.blocks[6].name == "d_rcs_d_angles");
    CHECK(report.blocks[7].name == "a_p");
    CHECK(report.blocks[5].max_err == 0.0);
    CHECK(report.blocks[6].max_err == 0.0);
    CHECK(report.pass());
    CHECK(report.worst() < report.tolerance);
}

TEST_CASE("gradcheck passes for the angle-dependent models") {
    ScenarioConfig config = default_config();

    config.model = EllipsoidRcs{};
    const GradcheckReport ellipsoid = gradcheck(config, 200, 2);
    CHECK(ellipsoid.model == "ellipsoid");
    CHECK(ellipsoid.pass());
    CHECK(ellipsoid.worst() < 1e-6);
    CHECK(ellipsoid.blocks[5].max_err > 0.0);
    CHECK(ellipsoid.blocks[6].max_err > 0.0);

    config.model = SpikeballRcs{};
    const GradcheckReport spikeball = gradcheck(config, 200, 3);
    CHECK(spikeball.model == "spikeball");
    CHECK(spikeball.pass());
    CHECK(spikeball.worst() < 1e-6);

    double reported_worst = 0.0;
    for (const BlockCheck& block : spikeball.blocks) {
        reported_worst = std::max(reported_worst, block.max_err);
    }
    CHECK(spikeball.worst() == reported_worst);
}

TEST_CASE("gradcheck needs at least one sample") {
    CHECK_THROWS_AS(gradcheck(default_config(), 0, 1), ValidationError);
}
