#include <doctest.h>

#include <cmath>
#include <random>

#include "emflight/config.hpp"
#include "emflight/epm.hpp"

using namespace emflight;

TEST_SUITE("epm") {

TEST_CASE("thrust at rest equals the weight") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    CHECK(cruise_thrust({0.0, 0.0, {}}, p, d) ==
          doctest::Approx(d.m_total * p.g).epsilon(1e-15));
}

TEST_CASE("level path drops the weight-drag cross term") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const double v = 17.0;
    const double weight = p.g * d.m_total;
    const double drag = 0.5 * p.rho * d.cda_sum * v * v;
    CHECK(cruise_thrust({v, 0.0, {}}, p, d) ==
          doctest::Approx(std::hypot(weight, drag)).epsilon(1e-14));
}

TEST_CASE("thrust at 12 m/s matches direct evaluation") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const double drag = 0.5 * 1.225 * d.cda_sum * 144.0;
    const double expected = std::sqrt(25.20399 * 25.20399 + drag * drag);
    CHECK(cruise_thrust({12.0, 0.0, {}}, p, d) ==
          doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("climbing thrust exceeds descending thrust") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    CHECK(cruise_thrust({12.0, 0.2, {}}, p, d) >
          cruise_thrust({12.0, -0.2, {}}, p, d));
}

TEST_CASE("breakdown components re-sum to the total") {
    const DroneParams base = default_drone();
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> v_dist(0.3, 25.0);
    std::uniform_real_distribution<double> pavio_dist(0.0, 40.0);
    std::uniform_real_distribution<double> mass_dist(0.0, 1.5);
    for (int i = 0; i < 1000; ++i) {
        DroneParams p = base;
        p.p_avio = pavio_dist(rng);
        p.m3 = mass_dist(rng);
        p.eta_c = 0.9;
        const DerivedParams d = derive(p);
        const auto method = static_cast<DownwashMethod>(i % 3);
        const EpmBreakdown b = epm({v_dist(rng), 0.0, method}, p, d);
        const double resum =
            (b.induced + b.parasitic + b.profile + b.rotor) / p.eta + b.avionics;
        CHECK(std::abs(resum - b.total) <= 1e-12 * b.total);
        CHECK(b.induced >= 0.0);
        CHECK(b.parasitic >= 0.0);
        CHECK(b.profile >= 0.0);
        CHECK(b.rotor >= 0.0);
        CHECK(b.avionics >= 0.0);
    }
}

TEST_CASE("epm diverges toward zero airspeed") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    CHECK(epm({0.01, 0.0, DownwashMethod::Root}, p, d).total >
          100.0 * epm({1.0, 0.0, DownwashMethod::Root}, p, d).total);
    CHECK_THROWS_AS(epm({0.0, 0.0, DownwashMethod::Root}, p, d), ConfigError);
}

TEST_CASE("zero avionics power zeroes the avionics component") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    for (double v = 1.0; v < 25.0; v += 3.7)
        CHECK(epm({v, 0.0, DownwashMethod::Root}, p, d).avionics == 0.0);
}

TEST_CASE("grid optimum sits near 12 m/s and 42 J/m") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const auto opt = optimal_airspeed(p, d, DownwashMethod::Root,
                                      {0.5, 25.0, 0.01}, ExecMode::Serial);
    CHECK(opt.v_opt > 11.5);
    CHECK(opt.v_opt < 12.5);
    CHECK(std::abs(opt.epm_opt - 42.17) / 42.17 < 0.05);
}

TEST_CASE("epm curve is unimodal at grid resolution") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const auto curve =
        epm_curve(p, d, DownwashMethod::Root, {0.5, 25.0, 0.01}, ExecMode::Serial);
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].e.total < curve[argmin].e.total) argmin = i;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        if (i < argmin)
            CHECK(curve[i + 1].e.total < curve[i].e.total);
        else
            CHECK(curve[i + 1].e.total > curve[i].e.total);
    }
}

TEST_CASE("optimum is stable under grid refinement") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const auto coarse = optimal_airspeed(p, d, DownwashMethod::Root,
                                         {0.5, 25.0, 0.01}, ExecMode::Serial);
    const auto fine = optimal_airspeed(p, d, DownwashMethod::Root,
                                       {0.5, 25.0, 0.005}, ExecMode::Serial);
    CHECK(std::abs(coarse.v_opt - fine.v_opt) < 0.02);
    CHECK_THROWS_AS(optimal_airspeed(p, d, DownwashMethod::Root,
                                     {0.5, 25.0, 0.5}, ExecMode::Serial),
                    ConfigError);
}

TEST_CASE("avionics load never lowers the optimal airspeed") {
    DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const auto lean = optimal_airspeed(p, d, DownwashMethod::Root,
                                       {0.5, 25.0, 0.01}, ExecMode::Serial);
    p.p_avio = 60.0;
    const auto heavy = optimal_airspeed(p, derive(p), DownwashMethod::Root,
                                        {0.5, 25.0, 0.01}, ExecMode::Serial);
    CHECK(heavy.v_opt >= lean.v_opt);
}

TEST_CASE("method gaps across the speed range") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const auto rel_gap = [&](DownwashMethod a, DownwashMethod b, double v) {
        const double ea = epm({v, 0.0, a}, p, d).total;
        const double eb = epm({v, 0.0, b}, p, d).total;
        return std::abs(ea - eb) / ea;
    };
    // Root and Hover separate as speed builds, Root and Glauert converge.
    CHECK(rel_gap(DownwashMethod::Root, DownwashMethod::Hover, 2.0) < 0.02);
    CHECK(rel_gap(DownwashMethod::Root, DownwashMethod::Hover, 20.0) > 0.10);
    CHECK(rel_gap(DownwashMethod::Root, DownwashMethod::Glauert, 20.0) < 0.05);
    CHECK(rel_gap(DownwashMethod::Root, DownwashMethod::Glauert, 3.0) > 0.5);
}

TEST_CASE("range curve scales with battery energy and peaks at the optimum") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const AirspeedGrid grid{1.0, 25.0, 0.01};
    const auto r1 = range_curve(p, d, DownwashMethod::Root, 5e5, grid,
                                ExecMode::Serial);
    const auto r2 = range_curve(p, d, DownwashMethod::Root, 1e6, grid,
                                ExecMode::Serial);
    REQUIRE(r1.size() == r2.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r2[i].second == doctest::Approx(2.0 * r1[i].second).epsilon(1e-12));
        if (r1[i].second > r1[best].second) best = i;
    }
    const auto opt =
        optimal_airspeed(p, d, DownwashMethod::Root, grid, ExecMode::Serial);
    CHECK(r1[best].first == doctest::Approx(opt.v_opt).epsilon(1e-12));
    CHECK(r1[best].second == doctest::Approx(5e5 / opt.epm_opt).epsilon(1e-12));
    CHECK_THROWS_AS(
        range_curve(p, d, DownwashMethod::Root, 0.0, grid, ExecMode::Serial),
        ConfigError);
}

}  // TEST_SUITE
