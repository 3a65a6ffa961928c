#include "emflight/motor_energy.hpp"

#include "emflight/config.hpp"

namespace emflight {

MotorPowerCoefficients MotorPowerCoefficients::from(const DroneParams& p,
                                                    const DerivedParams& d) {
    const double kt = p.k_t_motor;
    const double kt2 = kt * kt;
    const double mixed = 2.0 * p.r_winding * p.d_f / kt + kt;

    MotorPowerCoefficients c{};
    c.c0 = p.r_winding * p.t_f_friction * p.t_f_friction / kt2;
    c.c1 = p.t_f_friction / kt * mixed;
    c.c2 = p.d_f / kt * (p.r_winding * p.d_f / kt + kt) +
           2.0 * p.r_winding * p.t_f_friction * d.k_tau / kt2;
    c.c3 = d.k_tau / kt * mixed;
    c.c4 = p.r_winding * d.k_tau * d.k_tau / kt2;
    c.c_accel = p.r_winding * d.j_total * d.j_total / kt2;

    if (!(c.c0 >= 0 && c.c1 > 0 && c.c2 > 0 && c.c3 > 0 && c.c4 > 0 && c.c_accel > 0))
        throw ConfigError("motor power polynomial has a non-positive coefficient; "
                          "check motor constants");
    return c;
}

PowerBreakdown motor_power(double omega, double alpha, const DroneParams& p,
                           const DerivedParams& d) {
    const auto c = MotorPowerCoefficients::from(p, d);
    PowerBreakdown b{};
    b.friction_const = c.c0;
    b.linear = c.c1 * omega;
    b.quadratic = c.c2 * omega * omega;
    b.cubic = c.c3 * omega * omega * omega;
    b.quartic = c.c4 * omega * omega * omega * omega;
    b.accel = c.c_accel * alpha * alpha;
    b.total = b.friction_const + b.linear + b.quadratic + b.cubic + b.quartic + b.accel;
    return b;
}

TrajectoryEnergy trajectory_energy(const Trajectory& traj, const DroneParams& p,
                                   const DerivedParams& d) {
    const auto c = MotorPowerCoefficients::from(p, d);
    const std::size_t n = traj.t.size();
    TrajectoryEnergy e;
    e.power_total.resize(n, 0.0);
    for (auto& series : e.power_motor) series.resize(n, 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        for (int m = 0; m < 4; ++m) {
            const double w = traj.states[k].omega[m];
            const double a = traj.controls[k].alpha[m];
            const double pw =
                c.c0 + w * (c.c1 + w * (c.c2 + w * (c.c3 + w * c.c4))) +
                c.c_accel * a * a;
            e.power_motor[m][k] = pw;
            e.power_total[k] += pw;
        }
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = traj.t[k + 1] - traj.t[k];
        for (int m = 0; m < 4; ++m)
            e.per_motor_j[m] += 0.5 * h * (e.power_motor[m][k] + e.power_motor[m][k + 1]);
    }
    for (int m = 0; m < 4; ++m) e.total_j += e.per_motor_j[m];
    return e;
}

}  // namespace emflight
