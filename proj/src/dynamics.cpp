#include "emflight/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace emflight {

const std::array<const char*, kStateDim>& state_component_names() {
    static const std::array<const char*, kStateDim> names = {
        "x", "y", "z", "vx", "vy", "vz", "phi", "theta", "psi",
        "phidot", "thetadot", "psidot", "omega1", "omega2", "omega3", "omega4"};
    return names;
}

double gravity_multiplier(const GravityMode& mode, double x, double y, double z) {
    if (mode.kind == GravityMode::Kind::Standard) return 1.0;
    const double dsq = square(x - mode.target[0]) + square(y - mode.target[1]) +
                       square(z - mode.target[2]);
    return 2.0 / (1.0 + std::exp(-mode.k_decay * dsq)) - 1.0;
}

MotorForces motor_forces(const QuadState& s, const DroneParams& p,
                         const DerivedParams& d) {
    MotorForces f{};
    for (int i = 0; i < 4; ++i) {
        f.force_n[i] = d.k_b * s.omega[i] * s.omega[i];
        f.torque_nm[i] = d.k_tau * s.omega[i] * s.omega[i];
        f.total_thrust_n += f.force_n[i];
    }
    f.omega_bar = s.omega[0] - s.omega[1] + s.omega[2] - s.omega[3];
    (void)p;
    return f;
}

std::array<double, kStateDim> derivative(const QuadState& s, const ControlInput& u,
                                         const GravityMode& mode,
                                         const DroneParams& p,
                                         const DerivedParams& d) {
    return state_derivative<double>(s.to_array(), u.alpha, mode, p, d);
}

ControlProfile ControlProfile::constant(const ControlInput& u0) {
    ControlProfile c;
    c.t = {0.0};
    c.u = {u0};
    return c;
}

ControlInput ControlProfile::sample(double time) const {
    if (t.empty()) return ControlInput{};
    if (time <= t.front()) return u.front();
    if (time >= t.back()) return u.back();
    const auto it = std::upper_bound(t.begin(), t.end(), time);
    const std::size_t hi = static_cast<std::size_t>(it - t.begin());
    const std::size_t lo = hi - 1;
    const double span = t[hi] - t[lo];
    const double w = span > 0.0 ? (time - t[lo]) / span : 0.0;
    ControlInput out;
    for (int i = 0; i < 4; ++i)
        out.alpha[i] = (1.0 - w) * u[lo].alpha[i] + w * u[hi].alpha[i];
    return out;
}

namespace {

using StateArray = std::array<double, kStateDim>;

StateArray axpy(const StateArray& a, double h, const StateArray& b) {
    StateArray r;
    for (int i = 0; i < kStateDim; ++i) r[i] = a[i] + h * b[i];
    return r;
}

}  // namespace

Trajectory integrate(const QuadState& s0, const ControlProfile& controls,
                     double t0, double t_end, double dt, const GravityMode& mode,
                     const DroneParams& p, const DerivedParams& d) {
    if (!(dt > 0.0)) throw NumericalError("integrate: dt must be positive");
    if (!(t_end > t0)) throw NumericalError("integrate: empty time span");

    Trajectory traj;
    const int steps = static_cast<int>(std::ceil((t_end - t0) / dt - 1e-9));
    traj.t.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.controls.reserve(steps + 1);

    StateArray s = s0.to_array();
    double t = t0;
    traj.t.push_back(t);
    traj.states.push_back(QuadState::from_array(s));
    traj.controls.push_back(controls.sample(t));

    for (int k = 0; k < steps; ++k) {
        const double h = std::min(dt, t_end - t);
        const auto ua = controls.sample(t).alpha;
        const auto um = controls.sample(t + 0.5 * h).alpha;
        const auto ub = controls.sample(t + h).alpha;

        const StateArray k1 = state_derivative(s, ua, mode, p, d);
        const StateArray k2 = state_derivative(axpy(s, 0.5 * h, k1), um, mode, p, d);
        const StateArray k3 = state_derivative(axpy(s, 0.5 * h, k2), um, mode, p, d);
        const StateArray k4 = state_derivative(axpy(s, h, k3), ub, mode, p, d);

        for (int i = 0; i < kStateDim; ++i)
            s[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;

        for (int m = 0; m < 4; ++m) {
            double& w = s[12 + m];
            if (w < 0.0) {
                w = 0.0;
                traj.clamp_events.push_back({t, m, false});
            } else if (w > p.omega_max) {
                w = p.omega_max;
                traj.clamp_events.push_back({t, m, true});
            }
        }
        for (int i = 0; i < kStateDim; ++i) {
            if (!std::isfinite(s[i]))
                throw NumericalError("integrate: state component " +
                                     std::string(state_component_names()[i]) +
                                     " diverged at t = " + std::to_string(t));
        }

        traj.t.push_back(t);
        traj.states.push_back(QuadState::from_array(s));
        traj.controls.push_back(controls.sample(t));
    }
    return traj;
}

double hover_omega(const DroneParams& p, const DerivedParams& d) {
    return std::sqrt(d.m_total * p.g / (4.0 * d.k_b));
}

}  // namespace emflight
