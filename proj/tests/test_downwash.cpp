#include <doctest.h>

#include <cmath>

#include "emflight/config.hpp"
#include "emflight/downwash.hpp"
#include "emflight/epm.hpp"

using namespace emflight;

namespace {

// Independent oracle: locate the positive real root by a plain sign-change
// scan over (0, 50] followed by bisection. Shares no code with the solver.
double bisect_oracle(double thrust, double v_a, double alpha,
                     const DroneParams& p, int* sign_changes = nullptr) {
    const double scale = thrust / (2.0 * p.n_rotors * p.rho * p.sigma_disk);
    const auto f = [&](double w) {
        return w * w * w * w + 2.0 * w * w * w * v_a * std::sin(alpha) +
               w * w * v_a * v_a - scale * scale;
    };
    const int cells = 20000;
    double root = -1.0;
    int changes = 0;
    double prev = 50.0 / cells;
    double fprev = f(prev);
    for (int i = 2; i <= cells; ++i) {
        const double w = 50.0 * i / cells;
        const double fw = f(w);
        if ((fprev < 0) != (fw < 0)) {
            ++changes;
            double lo = prev, hi = w;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((f(lo) < 0) != (f(mid) < 0))
                    hi = mid;
                else
                    lo = mid;
            }
            root = 0.5 * (lo + hi);
        }
        prev = w;
        fprev = fw;
    }
    if (sign_changes) *sign_changes = changes;
    return root;
}

}  // namespace

TEST_SUITE("downwash") {

TEST_CASE("angle of attack at rest is zero and grows monotonically") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    CHECK(angle_of_attack(0.0, p, d) == 0.0);
    double prev = 0.0;
    for (double v = 0.5; v <= 25.0; v += 0.5) {
        const double a = angle_of_attack(v, p, d);
        CHECK(a > prev);
        CHECK(a < 1.5707963);
        prev = a;
    }
}

TEST_CASE("angle of attack at 12 m/s matches direct evaluation") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const double expected =
        std::atan(0.5 * 1.225 * d.cda_sum * 144.0 / (9.807 * 2.57));
    CHECK(angle_of_attack(12.0, p, d) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("zero airspeed reduces the quartic to the hover closed form") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const double thrust = 25.20399;
    const auto sol = solve_root_downwash(thrust, 0.0, 0.0, p, d);
    const double expected =
        std::sqrt(thrust / (2.0 * p.n_rotors * p.rho * p.sigma_disk));
    CHECK(sol.root == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("root solver agrees with the scan-and-bisect oracle") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const double thrust = 25.20;
    const double v = 12.0;
    const double alpha = angle_of_attack(v, p, d);
    const auto sol = solve_root_downwash(thrust, v, alpha, p, d);
    const double oracle = bisect_oracle(thrust, v, alpha, p);
    CHECK(sol.root == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("returned root satisfies the fixed-point form") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    for (const double v : {0.0, 2.0, 8.0, 15.0, 24.0}) {
        const double alpha = angle_of_attack(v, p, d);
        const double thrust = cruise_thrust({std::max(v, 0.0), 0.0, {}}, p, d);
        const double w = solve_root_downwash(thrust, v, alpha, p, d).root;
        const double denom =
            std::hypot(v * std::cos(alpha), v * std::sin(alpha) + w);
        const double fixed_point =
            thrust / (2.0 * p.n_rotors * p.rho * p.sigma_disk * denom);
        CHECK(w == doctest::Approx(fixed_point).epsilon(1e-6));
    }
}

TEST_CASE("quartic residual and root uniqueness across the operating grid") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    for (double thrust = 1.0; thrust <= 100.0; thrust += 9.0) {
        for (double v = 0.0; v <= 25.0; v += 2.5) {
            const double alpha = angle_of_attack(v, p, d);
            const auto sol = solve_root_downwash(thrust, v, alpha, p, d);
            CHECK(sol.root > 0.0);
            CHECK(std::abs(sol.residual) < 1e-9);
            int changes = 0;
            bisect_oracle(thrust, v, alpha, p, &changes);
            CHECK(changes == 1);  // exactly one positive real root
        }
    }
}

TEST_CASE("solver is deterministic") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const auto a = solve_root_downwash(25.2, 12.0, 0.4, p, d);
    const auto b = solve_root_downwash(25.2, 12.0, 0.4, p, d);
    CHECK(a.root == b.root);
    CHECK(a.residual == b.residual);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("hover downwash scales with the square root of thrust") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const double w1 = hover_downwash(10.0, p, d);
    const double w4 = hover_downwash(40.0, p, d);
    CHECK(w4 == doctest::Approx(2.0 * w1).epsilon(1e-12));
}

TEST_CASE("hover downwash per-rotor value") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    // total thrust 25.20 N -> per-rotor 6.30 N over the disk area
    const double expected = std::sqrt(6.30 / (2.0 * 1.225 * 0.05067));
    CHECK(hover_downwash(25.20, p, d) == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("glauert properties") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const double thrust = 25.2;
    CHECK(glauert_downwash(thrust, 10.0, p, d) ==
          doctest::Approx(2.0 * glauert_downwash(thrust, 20.0, p, d)).epsilon(1e-12));
    // w * v constant for fixed thrust
    const double a = glauert_downwash(thrust, 5.0, p, d) * 5.0;
    const double b = glauert_downwash(thrust, 19.0, p, d) * 19.0;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK_THROWS_AS(glauert_downwash(thrust, 0.0, p, d), ConfigError);
}

TEST_CASE("method dispatch") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const double thrust = 30.0;
    CHECK(downwash(DownwashMethod::Hover, thrust, 7.0, p, d) ==
          hover_downwash(thrust, p, d));
    CHECK(downwash(DownwashMethod::Hover, thrust, 0.0, p, d) ==
          downwash(DownwashMethod::Hover, thrust, 19.0, p, d));
    const double closed =
        std::sqrt(thrust / (2.0 * p.n_rotors * p.rho * p.sigma_disk));
    CHECK(downwash(DownwashMethod::Root, thrust, 0.0, p, d) ==
          doctest::Approx(closed).epsilon(1e-12));
    CHECK_THROWS_AS(downwash(DownwashMethod::Glauert, thrust, 0.0, p, d),
                    ConfigError);
}

TEST_CASE("high speed closes the root-glauert gap, low speed opens it") {
    const DroneParams p = default_drone();
    const DerivedParams d = derive(p);
    const auto gap = [&](double v) {
        const double thrust = cruise_thrust({v, 0.0, {}}, p, d);
        const double wr = downwash(DownwashMethod::Root, thrust, v, p, d);
        const double wg = downwash(DownwashMethod::Glauert, thrust, v, p, d);
        return std::abs(wg - wr) / wr;
    };
    CHECK(gap(20.0) < 0.15);
    CHECK(gap(3.0) > 1.0);
}

TEST_CASE("method names round-trip") {
    for (const auto m : {DownwashMethod::Root, DownwashMethod::Hover,
                         DownwashMethod::Glauert})
        CHECK(downwash_method_from_name(downwash_method_name(m)) == m);
    CHECK_THROWS_AS(downwash_method_from_name("bogus"), ConfigError);
}

}  // TEST_SUITE
