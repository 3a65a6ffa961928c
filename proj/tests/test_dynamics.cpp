#include <doctest.h>

#include <cmath>
#include <random>

#include "emflight/dynamics.hpp"

using namespace emflight;

namespace {

QuadState hover_state(const DroneParams& p, const DerivedParams& d) {
    QuadState s;
    s.omega.fill(hover_omega(p, d));
    return s;
}

double max_abs(const std::array<double, kStateDim>& a) {
    double m = 0.0;
    for (const double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("motor force basics") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);

    QuadState still;
    const auto f0 = motor_forces(still, p, d);
    CHECK(f0.total_thrust_n == 0.0);
    CHECK(f0.omega_bar == 0.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(f0.force_n[i] == 0.0);
        CHECK(f0.torque_nm[i] == 0.0);
    }

    QuadState even = hover_state(p, d);
    CHECK(motor_forces(even, p, d).omega_bar == 0.0);

    QuadState one, two;
    one.omega = {300, 0, 0, 0};
    two.omega = {600, 0, 0, 0};
    CHECK(motor_forces(two, p, d).force_n[0] ==
          doctest::Approx(4.0 * motor_forces(one, p, d).force_n[0]).epsilon(1e-12));
}

TEST_CASE("hover is an exact equilibrium under standard gravity") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const QuadState s = hover_state(p, d);
    const auto dsdt = derivative(s, {}, GravityMode::standard(), p, d);
    CHECK(max_abs(dsdt) < 1e-10);
}

TEST_CASE("gravity multiplier: exact at the target, saturating far away") {
    const GravityMode mode = GravityMode::incentivized({0, 0, 0}, 3.0);
    CHECK(gravity_multiplier(mode, 0, 0, 0) == 0.0);
    CHECK(gravity_multiplier(mode, 1, 0, 0) ==
          doctest::Approx(2.0 / (1.0 + std::exp(-3.0)) - 1.0).epsilon(1e-12));
    CHECK(gravity_multiplier(mode, 1, 0, 0) == doctest::Approx(0.9051).epsilon(1e-3));
    CHECK(gravity_multiplier(mode, 100, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    // Strictly below one until the sigmoid underflows to the plateau.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> near(-1.5, 1.5);
    std::uniform_real_distribution<double> far(-500, 500);
    for (int i = 0; i < 200; ++i) {
        const double m = gravity_multiplier(mode, near(rng), near(rng), near(rng));
        CHECK(m >= 0.0);
        CHECK(m < 1.0);
        CHECK(gravity_multiplier(mode, far(rng), far(rng), far(rng)) <= 1.0);
    }
}

TEST_CASE("at the target gravity vanishes from the vertical equation") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    QuadState s = hover_state(p, d);
    s.x = 3.0;
    const GravityMode mode = GravityMode::incentivized({3.0, 0, 0}, p.k_decay);
    const auto dsdt = derivative(s, {}, mode, p, d);
    // Hover thrust with no gravity to cancel: upward at g.
    CHECK(dsdt[5] == doctest::Approx(p.g).epsilon(1e-12));
}

TEST_CASE("drag opposes motion on every axis") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> vel(-30, 30);
    for (int i = 0; i < 200; ++i) {
        QuadState s;  // motors off: only gravity and drag act
        s.vx = vel(rng);
        s.vy = vel(rng);
        s.vz = vel(rng);
        const auto dsdt = derivative(s, {}, GravityMode::standard(), p, d);
        if (s.vx != 0.0) CHECK(dsdt[3] * s.vx < 0.0);
        if (s.vy != 0.0) CHECK(dsdt[4] * s.vy < 0.0);
        CHECK((dsdt[5] + p.g) * s.vz <= 0.0);
    }
}

TEST_CASE("zero controls hold the hover equilibrium for ten seconds") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const QuadState s0 = hover_state(p, d);
    const auto traj = integrate(s0, ControlProfile::constant({}), 0.0, 10.0, 0.01,
                                GravityMode::standard(), p, d);
    const auto last = traj.states.back().to_array();
    const auto first = s0.to_array();
    for (int i = 0; i < kStateDim; ++i)
        CHECK(std::abs(last[i] - first[i]) < 1e-7);
    CHECK(traj.clamp_events.empty());
}

TEST_CASE("free fall approaches the closed-form drag solution") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    QuadState s0;
    s0.z = 500.0;
    const auto traj = integrate(s0, ControlProfile::constant({}), 0.0, 6.0, 1e-3,
                                GravityMode::standard(), p, d);
    const double vt = std::sqrt(2.0 * d.m_total * p.g / (p.rho * p.cd1 * p.a1));
    for (std::size_t k = 0; k < traj.t.size(); k += 1000) {
        const double expected = -vt * std::tanh(p.g * traj.t[k] / vt);
        CHECK(traj.states[k].vz == doctest::Approx(expected).epsilon(1e-7));
        CHECK(traj.states[k].x == 0.0);
        CHECK(traj.states[k].y == 0.0);
    }
    CHECK(std::abs(traj.states.back().vz) < vt);
}

TEST_CASE("rk4 shows fourth-order convergence on a smooth profile") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    QuadState s0 = hover_state(p, d);
    s0.theta = 0.05;

    // A two-node profile interpolates exactly, so the right-hand side stays
    // smooth inside every step and the classical order is visible.
    ControlProfile profile;
    profile.t = {0.0, 2.0};
    ControlInput u0, u1;
    for (int m = 0; m < 4; ++m) {
        u0.alpha[m] = -20.0 - 4.0 * m;
        u1.alpha[m] = 30.0 + 6.0 * m;
    }
    profile.u = {u0, u1};

    const auto run = [&](double dt) {
        return integrate(s0, profile, 0.0, 2.0, dt, GravityMode::standard(), p, d)
            .states.back()
            .to_array();
    };
    const auto ref = run(0.00125);
    const auto coarse = run(0.02);
    const auto fine = run(0.01);
    double err_coarse = 0.0, err_fine = 0.0;
    for (int i = 0; i < kStateDim; ++i) {
        err_coarse = std::max(err_coarse, std::abs(coarse[i] - ref[i]));
        err_fine = std::max(err_fine, std::abs(fine[i] - ref[i]));
    }
    const double ratio = err_coarse / err_fine;
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("equal motors keep flight in the x-z plane") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    QuadState s0 = hover_state(p, d);
    s0.theta = 0.1;

    ControlProfile profile;
    for (int i = 0; i <= 100; ++i) {
        const double t = 3.0 * i / 100.0;
        ControlInput u;
        u.alpha.fill(30.0 * std::sin(2.0 * t));
        profile.t.push_back(t);
        profile.u.push_back(u);
    }
    const auto traj = integrate(s0, profile, 0.0, 3.0, 0.01,
                                GravityMode::standard(), p, d);
    for (const auto& s : traj.states) {
        CHECK(s.y == 0.0);
        CHECK(s.phi == 0.0);
        CHECK(s.psi == 0.0);
        CHECK(s.vy == 0.0);
    }
    CHECK(std::abs(traj.states.back().x) > 1.0);
}

TEST_CASE("motor clamping is recorded, not fatal") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    QuadState s0 = hover_state(p, d);
    ControlInput shove;
    shove.alpha.fill(2000.0);
    const auto traj = integrate(s0, ControlProfile::constant(shove), 0.0, 0.5,
                                0.01, GravityMode::standard(), p, d);
    CHECK(!traj.clamp_events.empty());
    CHECK(traj.clamp_events.front().at_upper);
    for (int m = 0; m < 4; ++m)
        CHECK(traj.states.back().omega[m] == p.omega_max);
}

TEST_CASE("divergence aborts with a diagnostic") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    ControlInput bad;
    bad.alpha.fill(std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(integrate(hover_state(p, d), ControlProfile::constant(bad),
                              0.0, 0.1, 0.01, GravityMode::standard(), p, d),
                    NumericalError);
    CHECK_THROWS_AS(integrate(hover_state(p, d), ControlProfile::constant({}),
                              0.0, 1.0, -0.1, GravityMode::standard(), p, d),
                    NumericalError);
}

}  // TEST_SUITE
