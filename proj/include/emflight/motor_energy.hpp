#pragma once

#include <array>
#include <vector>

#include "emflight/dynamics.hpp"
#include "emflight/params.hpp"

namespace emflight {

// Electrical power polynomial of one motor,
//   P(w, a) = c0 + c1 w + c2 w^2 + c3 w^3 + c4 w^4 + c_accel a^2,
// with coefficients built from the motor constants and the propeller drag
// factor. Every coefficient is strictly positive for physical parameters,
// which makes P strictly increasing in w on w >= 0.
struct MotorPowerCoefficients {
    double c0, c1, c2, c3, c4, c_accel;

    static MotorPowerCoefficients from(const DroneParams& p, const DerivedParams& d);
};

struct PowerBreakdown {
    double friction_const;  // R T_f^2 / K_T^2 [W]
    double linear;
    double quadratic;
    double cubic;
    double quartic;
    double accel;
    double total;
};

PowerBreakdown motor_power(double omega, double alpha, const DroneParams& p,
                           const DerivedParams& d);

struct TrajectoryEnergy {
    double total_j = 0.0;
    std::array<double, 4> per_motor_j{0, 0, 0, 0};
    std::vector<double> power_total;                 // per sample [W]
    std::array<std::vector<double>, 4> power_motor;  // per sample [W]
};

// Trapezoidal time integral of the four motor powers, matching the
// collocation quadrature.
TrajectoryEnergy trajectory_energy(const Trajectory& traj, const DroneParams& p,
                                   const DerivedParams& d);

}  // namespace emflight
