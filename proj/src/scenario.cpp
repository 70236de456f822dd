#include "radsense/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace radsense {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct RawEntry {
    int line = 0;
    std::string key;
    std::string value;
};

using EntryMap = std::map<std::string, RawEntry>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool is_known_key(const std::string& key) {
    static const char* const kFixed[] = {
        "radar.position_n_m",    "radar.position_e_m", "radar.position_d_m",
        "radar.c_r",             "radar.p_fa",         "model.type",
        "model.c_c",             "model.a",            "model.b",
        "model.c",               "model.a_s",          "model.b_s",
        "model.n",               "sweep.theta_r_start_deg",
        "sweep.theta_r_end_deg", "sweep.theta_r_step_deg",
        "sweep.range_m",         "sweep.down_m",       "sweep.heading_deg",
        "levels.enabled",        "mc.runs",            "mc.seed",
    };
    for (const char* fixed : kFixed) {
        if (key == fixed) {
            return true;
        }
    }
    for (const char* name : {"low", "medium", "high", "custom"}) {
        for (const char* field : {"sigma_pa_m", "sigma_ang_deg"}) {
            if (key == "levels." + std::string(name) + "." + field) {
                return true;
            }
        }
    }
    return false;
}

[[noreturn]] void bad_number(const RawEntry& e) {
    throw ParseError("line " + std::to_string(e.line) + ": invalid number '" +
                     e.value + "' for key '" + e.key + "'");
}

double entry_double(const RawEntry& e) {
    try {
        std::size_t idx = 0;
        const double v = std::stod(e.value, &idx);
        if (idx != e.value.size() || !std::isfinite(v)) {
            bad_number(e);
        }
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        bad_number(e);
    }
}

std::uint64_t entry_uint(const RawEntry& e) {
    if (!e.value.empty() && e.value.front() == '-') {
        bad_number(e);
    }
    try {
        std::size_t idx = 0;
        const std::uint64_t v = std::stoull(e.value, &idx);
        if (idx != e.value.size()) {
            bad_number(e);
        }
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        bad_number(e);
    }
}

int entry_int(const RawEntry& e) {
    try {
        std::size_t idx = 0;
        const long long v = std::stoll(e.value, &idx);
        if (idx != e.value.size() || v < std::numeric_limits<int>::min() ||
            v > std::numeric_limits<int>::max()) {
            bad_number(e);
        }
        return static_cast<int>(v);
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        bad_number(e);
    }
}

double take_double(const EntryMap& entries, const std::string& key,
                   double fallback) {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : entry_double(it->second);
}

bool has_any(const EntryMap& entries, std::initializer_list<const char*> keys,
             std::string* found) {
    for (const char* key : keys) {
        if (entries.count(key) != 0) {
            *found = key;
            return true;
        }
    }
    return false;
}

RcsModel assemble_model(const EntryMap& entries) {
    std::string type = "constant";
    if (const auto it = entries.find("model.type"); it != entries.end()) {
        type = it->second.value;
        if (type != "constant" && type != "ellipsoid" && type != "spikeball") {
            throw ParseError("line " + std::to_string(it->second.line) +
                             ": model.type must be constant, ellipsoid, or "
                             "spikeball, got '" +
                             type + "'");
        }
    }
    std::string stray;
    if (type == "constant") {
        if (has_any(entries,
                    {"model.a", "model.b", "model.c", "model.a_s", "model.b_s",
                     "model.n"},
                    &stray)) {
            throw ValidationError("'" + stray +
                                  "' does not apply to the constant model");
        }
        return ConstantRcs{take_double(entries, "model.c_c", 0.2)};
    }
    if (type == "ellipsoid") {
        if (has_any(entries, {"model.c_c", "model.a_s", "model.b_s", "model.n"},
                    &stray)) {
            throw ValidationError("'" + stray +
                                  "' does not apply to the ellipsoid model");
        }
        return EllipsoidRcs{take_double(entries, "model.a", 0.25),
                            take_double(entries, "model.b", 0.15),
                            take_double(entries, "model.c", 0.17)};
    }
    if (has_any(entries, {"model.c_c", "model.a", "model.b", "model.c"},
                &stray)) {
        throw ValidationError("'" + stray +
                              "' does not apply to the spikeball model");
    }
    SpikeballRcs model;
    model.a_s = take_double(entries, "model.a_s", model.a_s);
    model.b_s = take_double(entries, "model.b_s", model.b_s);
    if (const auto it = entries.find("model.n"); it != entries.end()) {
        model.n = entry_int(it->second);
    }
    if (model.n < 2 || model.n % 2 != 0) {
        throw ValidationError(
            "model.n must be an even integer >= 2 in configuration");
    }
    return model;
}

std::vector<UncertaintyLevel> assemble_levels(const EntryMap& entries) {
    std::string enabled = "low,medium,high";
    if (const auto it = entries.find("levels.enabled"); it != entries.end()) {
        enabled = it->second.value;
    }
    std::vector<std::string> names;
    std::stringstream tokens(enabled);
    std::string token;
    while (std::getline(tokens, token, ',')) {
        token = trim(token);
        if (!token.empty()) {
            names.push_back(token);
        }
    }
    if (names.empty()) {
        throw ValidationError("levels.enabled must list at least one level");
    }

    std::vector<UncertaintyLevel> levels;
    for (const std::string& name : names) {
        UncertaintyLevel level;
        if (name == "low") {
            level = UncertaintyLevel::low();
        } else if (name == "medium") {
            level = UncertaintyLevel::medium();
        } else if (name == "high") {
            level = UncertaintyLevel::high();
        } else if (name == "custom") {
            if (entries.count("levels.custom.sigma_pa_m") == 0 ||
                entries.count("levels.custom.sigma_ang_deg") == 0) {
                throw ValidationError(
                    "the custom level requires levels.custom.sigma_pa_m and "
                    "levels.custom.sigma_ang_deg");
            }
            level.label = UncertaintyLevel::Label::custom;
        } else {
            throw ValidationError("unknown level '" + name +
                                  "' in levels.enabled");
        }
        for (const UncertaintyLevel& seen : levels) {
            if (seen.label == level.label) {
                throw ValidationError("level '" + name +
                                      "' enabled more than once");
            }
        }
        level.sigma_pa = take_double(entries, "levels." + name + ".sigma_pa_m",
                                     level.sigma_pa);
        if (const auto it = entries.find("levels." + name + ".sigma_ang_deg");
            it != entries.end()) {
            level.sigma_ang = entry_double(it->second) * kDegToRad;
        }
        if (!(level.sigma_pa >= 0.0) || !(level.sigma_ang >= 0.0)) {
            throw ValidationError("level '" + name +
                                  "' standard deviations must be >= 0");
        }
        levels.push_back(level);
    }
    return levels;
}

}  // namespace

ScenarioConfig default_config() { return ScenarioConfig{}; }

ScenarioConfig parse_config(const std::string& text) {
    EntryMap entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'key = value', got '" + line + "'");
        }
        RawEntry entry;
        entry.line = line_no;
        entry.key = trim(line.substr(0, eq));
        entry.value = trim(line.substr(eq + 1));
        if (entry.key.empty() || entry.value.empty()) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'key = value', got '" + line + "'");
        }
        if (!is_known_key(entry.key)) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": unknown key '" + entry.key + "'");
        }
        if (entries.count(entry.key) != 0) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": duplicate key '" + entry.key + "'");
        }
        entries[entry.key] = entry;
    }

    ScenarioConfig config;
    config.radar = RadarSite(
        take_double(entries, "radar.position_n_m", 0.0),
        take_double(entries, "radar.position_e_m", 0.0),
        take_double(entries, "radar.position_d_m", 0.0),
        take_double(entries, "radar.c_r", config.radar.c_r),
        take_double(entries, "radar.p_fa", config.radar.p_fa));
    config.model = assemble_model(entries);
    validate_model(config.model);
    config.warnings = model_warnings(config.model);

    config.sweep.theta_r_start_deg = take_double(
        entries, "sweep.theta_r_start_deg", config.sweep.theta_r_start_deg);
    config.sweep.theta_r_end_deg = take_double(
        entries, "sweep.theta_r_end_deg", config.sweep.theta_r_end_deg);
    config.sweep.theta_r_step_deg = take_double(
        entries, "sweep.theta_r_step_deg", config.sweep.theta_r_step_deg);
    config.sweep.range_m =
        take_double(entries, "sweep.range_m", config.sweep.range_m);
    config.sweep.down_m =
        take_double(entries, "sweep.down_m", config.sweep.down_m);
    config.sweep.heading_rad =
        take_double(entries, "sweep.heading_deg", 0.0) * kDegToRad;
    validate_sweep_spec(config.sweep);

    config.levels = assemble_levels(entries);

    if (const auto it = entries.find("mc.runs"); it != entries.end()) {
        const std::uint64_t runs = entry_uint(it->second);
        if (runs < 1) {
            throw ValidationError("mc.runs must be >= 1");
        }
        config.mc_runs = static_cast<std::size_t>(runs);
    }
    if (const auto it = entries.find("mc.seed"); it != entries.end()) {
        config.mc_seed = entry_uint(it->second);
    }
    return config;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw ParseError("cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << file.rdbuf();
    return parse_config(text.str());
}

DetectionAnalysis analyze_pose(const AircraftState& state,
                               const RadarSite& radar, const RcsModel& model,
                               const UncertaintyLevel& level) {
    DetectionAnalysis analysis;
    analysis.state = state;
    analysis.point = evaluate_point(state, radar, model);
    analysis.lambda = std::numeric_limits<double>::quiet_NaN();
    analysis.phi = std::numeric_limits<double>::quiet_NaN();
    try {
        const AspectAngles angles = aspect_angles(radar_in_body(state, radar));
        analysis.lambda = angles.lambda;
        analysis.phi = angles.phi;
    } catch (const NadirSingularity&) {
        if (!std::holds_alternative<ConstantRcs>(model)) {
            throw;
        }
    }
    analysis.jacobian = assemble_a_p(state, radar, model);
    const PdVariance variance = propagate_variance(
        analysis.jacobian,
        PoseCovariance::from_sigmas(level.sigma_pa, level.sigma_ang));
    analysis.c_pd = variance.c_pd;
    analysis.sigma_pd = variance.sigma_pd;
    return analysis;
}

LinearSweepResult linear_sweep(const ScenarioConfig& config) {
    validate_model(config.model);
    const std::size_t count = sweep_point_count(config.sweep);

    LinearSweepResult result;
    result.levels = config.levels;
    result.theta_r_deg.resize(count);
    result.rows.resize(config.levels.size());
    for (std::size_t k = 0; k < count; ++k) {
        result.theta_r_deg[k] = sweep_theta_deg(config.sweep, k);
    }
    for (std::size_t li = 0; li < config.levels.size(); ++li) {
        result.rows[li].reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            DetectionAnalysis analysis =
                analyze_pose(nominal_state_at(config.sweep, k), config.radar,
                             config.model, config.levels[li]);
            analysis.theta_r_deg = result.theta_r_deg[k];
            result.rows[li].push_back(std::move(analysis));
        }
    }
    return result;
}

ValidationReport validate_sweep(const ScenarioConfig& config,
                                std::vector<double> histogram_theta_deg) {
    ValidationReport report;
    report.linear = linear_sweep(config);
    report.histogram_theta_deg = histogram_theta_deg;
    const std::size_t count = report.linear.theta_r_deg.size();

    for (std::size_t li = 0; li < config.levels.size(); ++li) {
        EnsembleSummary summary;
        summary.level = config.levels[li];
        summary.ensemble =
            run_ensemble(config.sweep, config.radar, config.model,
                         config.levels[li], config.mc_runs, config.mc_seed);

        std::vector<double> sigma_pd(count);
        for (std::size_t k = 0; k < count; ++k) {
            sigma_pd[k] = report.linear.rows[li][k].sigma_pd;
        }
        summary.coverage = coverage_check(summary.ensemble, sigma_pd);

        for (std::size_t k = 0; k < count; ++k) {
            const double dev = std::max(
                std::abs(summary.ensemble.ensemble_min[k] -
                         summary.ensemble.nominal_pd[k]),
                std::abs(summary.ensemble.ensemble_max[k] -
                         summary.ensemble.nominal_pd[k]));
            if (dev > summary.max_abs_deviation) {
                summary.max_abs_deviation = dev;
                summary.max_deviation_k = k;
            }
        }

        for (double want : histogram_theta_deg) {
            std::size_t best = 0;
            for (std::size_t k = 1; k < count; ++k) {
                if (std::abs(report.linear.theta_r_deg[k] - want) <
                    std::abs(report.linear.theta_r_deg[best] - want)) {
                    best = k;
                }
            }
            summary.histograms.push_back(
                histogram_vs_gaussian(summary.ensemble, best, sigma_pd[best]));
        }
        report.ensembles.push_back(std::move(summary));
    }
    return report;
}

double GradcheckReport::worst() const {
    double worst_err = 0.0;
    for (const BlockCheck& block : blocks) {
        worst_err = std::max(worst_err, block.max_err);
    }
    return worst_err;
}

bool GradcheckReport::pass() const { return worst() < tolerance; }

namespace {

AircraftState random_pose(Xoshiro256PlusPlus& rng, const RadarSite& radar) {
    const double cos_polar = 2.0 * rng.next_unit() - 1.0;
    const double azimuth = 2.0 * std::numbers::pi * rng.next_unit();
    const double sin_polar =
        std::sqrt(std::max(0.0, 1.0 - cos_polar * cos_polar));
    const Eigen::Vector3d direction(sin_polar * std::cos(azimuth),
                                    sin_polar * std::sin(azimuth), cos_polar);
    const double r = 1e4 + (1e6 - 1e4) * rng.next_unit();
    const Eigen::Vector3d position = radar.position() + r * direction;
    const double limit = std::numbers::pi / 3.0;
    return {position(0),
            position(1),
            position(2),
            limit * (2.0 * rng.next_unit() - 1.0),
            limit * (2.0 * rng.next_unit() - 1.0),
            limit * (2.0 * rng.next_unit() - 1.0)};
}

AircraftState shifted_state(const AircraftState& state, int entry,
                            double delta) {
    Eigen::Matrix<double, 6, 1> x = state.as_vector();
    x(entry) += delta;
    return AircraftState::from_vector(x);
}

}  // namespace

double fd_error(double analytic, double fd, double f_scale, double h,
                double rel_tol) {
    const double noise = kFdNoiseGuard *
                         std::numeric_limits<double>::epsilon() * f_scale /
                         (2.0 * h);
    const double floor = std::max(kFdAbsoluteFloor, noise);
    return std::abs(analytic - fd) / std::max(std::abs(fd), floor / rel_tol);
}

GradcheckReport gradcheck(const ScenarioConfig& config, std::size_t samples,
                          std::uint64_t seed) {
    if (samples < 1) {
        throw ValidationError("gradcheck needs at least one sample");
    }
    validate_model(config.model);
    const RadarSite& radar = config.radar;
    const RcsModel& model = config.model;
    const FdSteps steps;
    const bool angle_model = !std::holds_alternative<ConstantRcs>(model);
    const auto* spikeball = std::get_if<SpikeballRcs>(&model);

    GradcheckReport report;
    report.model = model_name(model);
    report.samples = samples;
    report.blocks = {
        {"d_pd_d_snr", 0.0},     {"d_snr_d_range", 0.0},
        {"d_range_d_state", 0.0}, {"d_snr_d_sigma", 0.0},
        {"d_body_d_state", 0.0}, {"d_angles_d_body", 0.0},
        {"d_rcs_d_angles", 0.0}, {"a_p", 0.0},
    };
    auto update = [&report](std::size_t block, double err) {
        report.blocks[block].max_err = std::max(report.blocks[block].max_err, err);
    };

    Xoshiro256PlusPlus rng(seed);
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    while (accepted < samples) {
        if (++attempts > samples * 1000 + 1000) {
            throw Error("gradcheck could not find enough valid poses");
        }
        const AircraftState state = random_pose(rng, radar);

        PdJacobian jacobian;
        try {
            jacobian = assemble_a_p(state, radar, model);
        } catch (const NadirSingularity&) {
            ++report.excluded_nadir;
            continue;
        }
        if (jacobian.near_nadir) {
            ++report.excluded_nadir;
            continue;
        }
        if (jacobian.near_gimbal_lock) {
            ++report.excluded_gimbal;
            continue;
        }

        BodyVector body;
        AspectAngles angles;
        if (angle_model) {
            body = radar_in_body(state, radar);
            angles = aspect_angles(body);
            if (spikeball != nullptr) {
                const double rho = std::hypot(body.p_rx, body.p_ry);
                const double body_norm = body.as_vector().norm();
                const double lambda_swing =
                    steps.position_m / rho +
                    steps.angle_rad * (body_norm / rho + 1.0);
                const double margin =
                    10.0 * 0.5 * spikeball->n * lambda_swing;
                const double corner =
                    std::sin(0.5 * spikeball->n * angles.lambda);
                if (jacobian.near_rcs_corner || std::abs(corner) < margin) {
                    ++report.excluded_corner;
                    continue;
                }
            }
        }
        ++accepted;

        const DetectionPoint point = evaluate_point(state, radar, model);
        const double s = point.snr;
        const double sigma_r = point.sigma_r;
        const double r = point.range_m;

        const double tol = report.tolerance;
        {
            const double h = steps.relative * s;
            const double fp = probability_of_detection(s + h, radar.p_fa);
            const double fm = probability_of_detection(s - h, radar.p_fa);
            const double fd = (fp - fm) / (2.0 * h);
            update(0, fd_error(d_pd_d_snr(s, radar.p_fa), fd,
                               std::max(fp, fm), h, tol));
        }
        {
            const double h = steps.position_m;
            const double fp = snr(radar, sigma_r, r + h);
            const double fm = snr(radar, sigma_r, r - h);
            const double fd = (fp - fm) / (2.0 * h);
            update(1, fd_error(d_snr_d_range(radar, sigma_r, r), fd,
                               std::max(fp, fm), h, tol));
        }
        {
            const Eigen::Matrix<double, 1, 6> analytic =
                d_range_d_state(state, radar);
            for (int j = 0; j < 6; ++j) {
                const double h = j < 3 ? steps.position_m : steps.angle_rad;
                const double fp = range(shifted_state(state, j, h), radar);
                const double fm = range(shifted_state(state, j, -h), radar);
                const double fd = (fp - fm) / (2.0 * h);
                update(2, fd_error(analytic(j), fd, std::max(fp, fm), h, tol));
            }
        }
        {
            const double h = steps.relative * sigma_r;
            const double fp = snr(radar, sigma_r + h, r);
            const double fm = snr(radar, sigma_r - h, r);
            const double fd = (fp - fm) / (2.0 * h);
            update(3, fd_error(d_snr_d_sigma(radar, r), fd, std::max(fp, fm),
                               h, tol));
        }
        {
            const Eigen::Matrix<double, 3, 6> analytic =
                d_body_d_state(state, radar);
            for (int j = 0; j < 6; ++j) {
                const double h = j < 3 ? steps.position_m : steps.angle_rad;
                const BodyVector bp =
                    radar_in_body(shifted_state(state, j, h), radar);
                const BodyVector bm =
                    radar_in_body(shifted_state(state, j, -h), radar);
                const Eigen::Vector3d vp = bp.as_vector();
                const Eigen::Vector3d vm = bm.as_vector();
                for (int row = 0; row < 3; ++row) {
                    const double fd = (vp(row) - vm(row)) / (2.0 * h);
                    const double scale =
                        std::max(std::abs(vp(row)), std::abs(vm(row)));
                    update(4, fd_error(analytic(row, j), fd, scale, h, tol));
                }
            }
        }
        if (angle_model) {
            const Eigen::Matrix<double, 2, 3> analytic = d_angles_d_body(body);
            const double h = steps.position_m;
            for (int j = 0; j < 3; ++j) {
                BodyVector bp = body;
                BodyVector bm = body;
                (j == 0 ? bp.p_rx : j == 1 ? bp.p_ry : bp.p_rz) += h;
                (j == 0 ? bm.p_rx : j == 1 ? bm.p_ry : bm.p_rz) -= h;
                const AspectAngles ap = aspect_angles(bp);
                const AspectAngles am = aspect_angles(bm);
                const double fd_lambda =
                    canonical_angle(ap.lambda - am.lambda) / (2.0 * h);
                const double fd_phi = (ap.phi - am.phi) / (2.0 * h);
                update(5, fd_error(analytic(0, j), fd_lambda, 4.0, h, tol));
                update(5, fd_error(analytic(1, j), fd_phi, 4.0, h, tol));
            }

            const RcsGradient grad = d_rcs_d_angles(model, angles);
            const double ha = steps.angle_rad;
            const double sp_l =
                rcs_value(model, {angles.lambda + ha, angles.phi});
            const double sm_l =
                rcs_value(model, {angles.lambda - ha, angles.phi});
            const double sp_p =
                rcs_value(model, {angles.lambda, angles.phi + ha});
            const double sm_p =
                rcs_value(model, {angles.lambda, angles.phi - ha});
            update(6, fd_error(grad.d_lambda, (sp_l - sm_l) / (2.0 * ha),
                               std::max(sp_l, sm_l), ha, tol));
            update(6, fd_error(grad.d_phi, (sp_p - sm_p) / (2.0 * ha),
                               std::max(sp_p, sm_p), ha, tol));
        }
        {
            for (int j = 0; j < 6; ++j) {
                const double h = j < 3 ? steps.position_m : steps.angle_rad;
                const double pd_p =
                    evaluate_point(shifted_state(state, j, h), radar, model).p_d;
                const double pd_m =
                    evaluate_point(shifted_state(state, j, -h), radar, model)
                        .p_d;
                const double fd = (pd_p - pd_m) / (2.0 * h);
                update(7, fd_error(jacobian.a_p(j), fd,
                                   std::max(pd_p, pd_m), h, tol));
            }
        }
    }
    return report;
}

}  // namespace radsense
