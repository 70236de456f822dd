#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "radsense/geometry.hpp"
#include "radsense/rng.hpp"

using namespace radsense;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform_angle(Xoshiro256PlusPlus& rng) {
    return kPi * (2.0 * rng.next_unit() - 1.0);
}

}  // namespace

TEST_CASE("canonical_angle wraps into (-pi, pi]") {
    CHECK(canonical_angle(0.0) == 0.0);
    CHECK(canonical_angle(kPi) == kPi);
    CHECK(canonical_angle(-kPi) == kPi);
    CHECK(canonical_angle(3.0 * kPi) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(canonical_angle(2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(canonical_angle(-0.5) == -0.5);
    CHECK(canonical_angle(1.25) == 1.25);

    Xoshiro256PlusPlus rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double raw = 50.0 * (2.0 * rng.next_unit() - 1.0);
        const double wrapped = canonical_angle(raw);
        CHECK(wrapped > -kPi);
        CHECK(wrapped <= kPi);
        CHECK(std::abs(std::remainder(wrapped - raw, 2.0 * kPi)) < 1e-9);
    }
}

TEST_CASE("AircraftState canonicalizes angles and rejects non-finite input") {
    const AircraftState state(1.0, 2.0, 3.0, 3.0 * kPi, -kPi, 2.0 * kPi);
    CHECK(state.phi_a == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(state.theta_a == kPi);
    CHECK(state.psi_a == doctest::Approx(0.0).epsilon(1e-15));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(AircraftState(nan, 0, 0, 0, 0, 0), ValidationError);
    CHECK_THROWS_AS(AircraftState(0, inf, 0, 0, 0, 0), ValidationError);
    CHECK_THROWS_AS(AircraftState(0, 0, 0, 0, nan, 0), ValidationError);
}

TEST_CASE("AircraftState vector round trip") {
    const AircraftState state(1.5, -2.5, 3.5, 0.1, -0.2, 0.3);
    const Eigen::Matrix<double, 6, 1> x = state.as_vector();
    CHECK(x(0) == 1.5);
    CHECK(x(1) == -2.5);
    CHECK(x(2) == 3.5);
    CHECK(x(3) == 0.1);
    CHECK(x(4) == -0.2);
    CHECK(x(5) == 0.3);

    const AircraftState back = AircraftState::from_vector(x);
    CHECK(back.p_an == state.p_an);
    CHECK(back.p_ae == state.p_ae);
    CHECK(back.p_ad == state.p_ad);
    CHECK(back.phi_a == state.phi_a);
    CHECK(back.theta_a == state.theta_a);
    CHECK(back.psi_a == state.psi_a);
}

TEST_CASE("RadarSite validates its parameters") {
    const RadarSite site;
    CHECK(site.c_r == 167.4);
    CHECK(site.p_fa == 1.7e-4);

    CHECK_THROWS_AS(RadarSite(0, 0, 0, 0.0, 1e-4), ValidationError);
    CHECK_THROWS_AS(RadarSite(0, 0, 0, -1.0, 1e-4), ValidationError);
    CHECK_THROWS_AS(RadarSite(0, 0, 0, 167.4, 0.0), InvalidPfa);
    CHECK_THROWS_AS(RadarSite(0, 0, 0, 167.4, 1.0), InvalidPfa);
    CHECK_THROWS_AS(RadarSite(0, 0, 0, 167.4, -0.5), InvalidPfa);
    CHECK_THROWS_AS(RadarSite(0, 0, 0, 167.4, 1.5), InvalidPfa);
}

TEST_CASE("dcm at zero angles is the identity") {
    const Eigen::Matrix3d m = dcm_ned_to_body(AircraftState{});
    CHECK((m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dcm at yaw pi/2 maps unit north to body +y") {
    const AircraftState state(0, 0, 0, 0.0, 0.0, kPi / 2.0);
    const Eigen::Vector3d mapped =
        dcm_ned_to_body(state) * Eigen::Vector3d::UnitX();
    CHECK(mapped(0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(mapped(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mapped(2) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("dcm is orthonormal with unit determinant") {
    Xoshiro256PlusPlus rng(17);
    double worst_ortho = 0.0;
    double worst_det = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const AircraftState state(0, 0, 0, uniform_angle(rng),
                                  uniform_angle(rng), uniform_angle(rng));
        const Eigen::Matrix3d m = dcm_ned_to_body(state);
        worst_ortho = std::max(
            worst_ortho, (m.transpose() * m - Eigen::Matrix3d::Identity())
                             .cwiseAbs()
                             .maxCoeff());
        worst_det = std::max(worst_det, std::abs(m.determinant() - 1.0));
    }
    CHECK(worst_ortho < 1e-13);
    CHECK(worst_det < 1e-13);
}

TEST_CASE("radar_in_body examples") {
    SUBCASE("identity rotation passes the displacement through") {
        const AircraftState state;
        const RadarSite radar(1.0, 2.0, 3.0, 167.4, 1.7e-4);
        const BodyVector b = radar_in_body(state, radar);
        CHECK(b.p_rx == 1.0);
        CHECK(b.p_ry == 2.0);
        CHECK(b.p_rz == 3.0);
    }
    SUBCASE("aircraft at the radar position") {
        const AircraftState state(1.0, 2.0, 3.0, 0.2, -0.1, 0.4);
        const RadarSite radar(1.0, 2.0, 3.0, 167.4, 1.7e-4);
        const BodyVector b = radar_in_body(state, radar);
        CHECK(b.p_rx == 0.0);
        CHECK(b.p_ry == 0.0);
        CHECK(b.p_rz == 0.0);
    }
    SUBCASE("pure altitude offset") {
        const AircraftState state(0.0, 0.0, -3000.0, 0.0, 0.0, 0.0);
        const BodyVector b = radar_in_body(state, RadarSite{});
        CHECK(b.p_rx == 0.0);
        CHECK(b.p_ry == 0.0);
        CHECK(b.p_rz == 3000.0);
    }
}

TEST_CASE("body vector round trip recovers the NED displacement") {
    Xoshiro256PlusPlus rng(23);
    for (int i = 0; i < 1000; ++i) {
        const AircraftState state(1e5 * (2.0 * rng.next_unit() - 1.0),
                                  1e5 * (2.0 * rng.next_unit() - 1.0),
                                  -1e4 * rng.next_unit(), uniform_angle(rng),
                                  uniform_angle(rng), uniform_angle(rng));
        const RadarSite radar(100.0, -200.0, 0.0, 167.4, 1.7e-4);
        const Eigen::Matrix3d m = dcm_ned_to_body(state);
        const Eigen::Vector3d b = radar_in_body(state, radar).as_vector();
        const Eigen::Vector3d recovered = m.transpose() * b + state.position();
        const double scale = (radar.position() - state.position()).norm();
        CHECK((recovered - radar.position()).norm() < 1e-9 * scale);
    }
}

TEST_CASE("aspect_angles examples") {
    SUBCASE("nose-on") {
        const AspectAngles a = aspect_angles({1.0, 0.0, 0.0});
        CHECK(a.lambda == 0.0);
        CHECK(a.phi == 0.0);
    }
    SUBCASE("starboard beam") {
        const AspectAngles a = aspect_angles({0.0, 1.0, 0.0});
        CHECK(a.lambda == doctest::Approx(kPi / 2.0).epsilon(1e-15));
        CHECK(a.phi == 0.0);
    }
    SUBCASE("45 degrees below the nose") {
        const AspectAngles a = aspect_angles({1.0, 0.0, 1.0});
        CHECK(a.lambda == 0.0);
        CHECK(a.phi == doctest::Approx(kPi / 4.0).epsilon(1e-15));
    }
}

TEST_CASE("aspect_angles recovers generating angles") {
    Xoshiro256PlusPlus rng(29);
    for (int i = 0; i < 5000; ++i) {
        const double lambda = uniform_angle(rng);
        const double phi =
            (kPi / 2.0 - 1e-6) * (2.0 * rng.next_unit() - 1.0);
        const double r = 1.0 + 1e6 * rng.next_unit();
        const BodyVector b{r * std::cos(lambda) * std::cos(phi),
                           r * std::sin(lambda) * std::cos(phi),
                           r * std::sin(phi)};
        const AspectAngles a = aspect_angles(b);
        CHECK(std::abs(canonical_angle(a.lambda - lambda)) < 1e-12);
        CHECK(std::abs(a.phi - phi) < 1e-12);
        CHECK(a.lambda > -kPi);
        CHECK(a.lambda <= kPi);
        CHECK(std::abs(a.phi) <= kPi / 2.0);
    }
}

TEST_CASE("aspect_angles throws on the nadir singularity") {
    CHECK_THROWS_AS(aspect_angles({0.0, 0.0, 5.0}), NadirSingularity);
    CHECK_THROWS_AS(aspect_angles({0.0, 0.0, -5.0}), NadirSingularity);
    CHECK_THROWS_AS(aspect_angles({0.0, 0.0, 0.0}), NadirSingularity);
    CHECK_THROWS_AS(aspect_angles({1e-10, 0.0, 5.0}), NadirSingularity);
    CHECK_NOTHROW(aspect_angles({2e-9, 0.0, 5.0}));
}

TEST_CASE("range examples") {
    SUBCASE("3-4-5 triangle") {
        const AircraftState state(3.0, 4.0, 0.0, 0, 0, 0);
        CHECK(range(state, RadarSite{}) == 5.0);
    }
    SUBCASE("coincident positions") {
        const AircraftState state(1.0, 2.0, 3.0, 0, 0, 0);
        const RadarSite radar(1.0, 2.0, 3.0, 167.4, 1.7e-4);
        CHECK(range(state, radar) == 0.0);
    }
    SUBCASE("sweep circle at constant altitude") {
        const double expected = std::hypot(650000.0, 3000.0);
        for (double theta_deg : {0.0, 13.5, 90.0, 122.0, 180.0}) {
            const double theta = theta_deg * kPi / 180.0;
            const AircraftState state(650000.0 * std::sin(theta),
                                      650000.0 * std::cos(theta), -3000.0, 0,
                                      0, 0);
            CHECK(range(state, RadarSite{}) ==
                  doctest::Approx(expected).epsilon(1e-15));
        }
    }
}

TEST_CASE("range is invariant to aircraft attitude") {
    Xoshiro256PlusPlus rng(31);
    const RadarSite radar(10.0, 20.0, -5.0, 167.4, 1.7e-4);
    for (int i = 0; i < 200; ++i) {
        const double pn = 1e5 * (2.0 * rng.next_unit() - 1.0);
        const double pe = 1e5 * (2.0 * rng.next_unit() - 1.0);
        const double pd = -1e4 * rng.next_unit();
        const AircraftState level(pn, pe, pd, 0, 0, 0);
        const AircraftState rolled(pn, pe, pd, uniform_angle(rng),
                                   uniform_angle(rng), uniform_angle(rng));
        CHECK(range(level, radar) == range(rolled, radar));
    }
}
