#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "emflight/params.hpp"
#include "emflight/scalar_ops.hpp"

namespace emflight {

// Simulation or optimization produced a non-finite quantity.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kStateDim = 16;
inline constexpr int kControlDim = 4;

// State layout (also the order inside flat arrays and CSV columns):
// x y z vx vy vz phi theta psi phidot thetadot psidot omega1..omega4
struct QuadState {
    double x = 0, y = 0, z = 0;           // position, earth frame [m]
    double vx = 0, vy = 0, vz = 0;        // velocity [m/s]
    double phi = 0, theta = 0, psi = 0;   // roll, pitch, yaw [rad]
    double phi_dot = 0, theta_dot = 0, psi_dot = 0;  // Euler rates [rad/s]
    std::array<double, 4> omega{0, 0, 0, 0};         // motor speeds [rad/s]

    std::array<double, kStateDim> to_array() const {
        return {x, y, z, vx, vy, vz, phi, theta, psi,
                phi_dot, theta_dot, psi_dot,
                omega[0], omega[1], omega[2], omega[3]};
    }
    static QuadState from_array(const std::array<double, kStateDim>& a) {
        QuadState s;
        s.x = a[0]; s.y = a[1]; s.z = a[2];
        s.vx = a[3]; s.vy = a[4]; s.vz = a[5];
        s.phi = a[6]; s.theta = a[7]; s.psi = a[8];
        s.phi_dot = a[9]; s.theta_dot = a[10]; s.psi_dot = a[11];
        s.omega = {a[12], a[13], a[14], a[15]};
        return s;
    }
};

const std::array<const char*, kStateDim>& state_component_names();

// Motor angular accelerations [rad/s^2].
struct ControlInput {
    std::array<double, 4> alpha{0, 0, 0, 0};
};

// Vertical-axis gravity handling. Incentivized multiplies g by a sigmoid of
// the squared distance to the target so gravity vanishes on arrival;
// Standard keeps the multiplier at one.
struct GravityMode {
    enum class Kind { Standard, Incentivized };
    Kind kind = Kind::Standard;
    std::array<double, 3> target{0, 0, 0};
    double k_decay = 3.0;

    static GravityMode standard() { return {}; }
    static GravityMode incentivized(const std::array<double, 3>& target,
                                    double k_decay) {
        GravityMode m;
        m.kind = Kind::Incentivized;
        m.target = target;
        m.k_decay = k_decay;
        return m;
    }
};

// 2/(1 + exp(-k |dx|^2)) - 1; zero at the target, under one everywhere.
double gravity_multiplier(const GravityMode& mode, double x, double y, double z);

// Per-motor thrust and reaction torque plus aggregates at one state.
struct MotorForces {
    std::array<double, 4> force_n;    // k_b w_i^2
    std::array<double, 4> torque_nm;  // k_tau w_i^2
    double total_thrust_n;
    double omega_bar;                 // w1 - w2 + w3 - w4
};

MotorForces motor_forces(const QuadState& s, const DroneParams& p,
                         const DerivedParams& d);

// Full 16-dimensional rigid-body derivative. Templated on the scalar so the
// same expression serves plain simulation and the AD pass of the optimizer.
template <typename T>
std::array<T, kStateDim> state_derivative(const std::array<T, kStateDim>& s,
                                          const std::array<T, kControlDim>& u,
                                          const GravityMode& mode,
                                          const DroneParams& p,
                                          const DerivedParams& d) {
    using std::sin;
    using std::cos;
    using std::exp;

    const T& vx = s[3];
    const T& vy = s[4];
    const T& vz = s[5];
    const T& phi = s[6];
    const T& theta = s[7];
    const T& psi = s[8];
    const T& phi_dot = s[9];
    const T& theta_dot = s[10];
    const T& psi_dot = s[11];

    const T w1sq = square(s[12]);
    const T w2sq = square(s[13]);
    const T w3sq = square(s[14]);
    const T w4sq = square(s[15]);
    const T f1 = d.k_b * w1sq;
    const T f2 = d.k_b * w2sq;
    const T f3 = d.k_b * w3sq;
    const T f4 = d.k_b * w4sq;
    const T thrust = f1 + f2 + f3 + f4;
    const T omega_bar = s[12] - s[13] + s[14] - s[15];

    const T sphi = sin(phi), cphi = cos(phi);
    const T sth = sin(theta), cth = cos(theta);
    const T spsi = sin(psi), cpsi = cos(psi);

    const double inv_m = 1.0 / (p.m1 + p.m2 + p.m3);
    const double drag = 0.5 * p.cd1 * p.rho * p.a1 * inv_m;

    T sigma;
    if (mode.kind == GravityMode::Kind::Incentivized) {
        const T dsq = square(s[0] - mode.target[0]) +
                      square(s[1] - mode.target[1]) +
                      square(s[2] - mode.target[2]);
        sigma = 2.0 / (1.0 + exp(-mode.k_decay * dsq)) - 1.0;
    } else {
        sigma = T(1.0);
    }

    std::array<T, kStateDim> out;
    out[0] = vx;
    out[1] = vy;
    out[2] = vz;
    out[3] = thrust * inv_m * (cphi * sth * cpsi + sphi * spsi) -
             drag * signed_square(vx);
    out[4] = thrust * inv_m * (cphi * sth * spsi - sphi * cpsi) -
             drag * signed_square(vy);
    out[5] = thrust * inv_m * (cphi * cth) - p.g * sigma - drag * signed_square(vz);
    out[6] = phi_dot;
    out[7] = theta_dot;
    out[8] = psi_dot;
    out[9] = ((p.i_y - p.i_z) / p.i_x) * theta_dot * psi_dot +
             (f2 - f4) * (p.l_arm / p.i_x) -
             (d.j_total / p.i_x) * theta_dot * omega_bar;
    out[10] = ((p.i_z - p.i_x) / p.i_y) * phi_dot * psi_dot +
              (f3 - f1) * (p.l_arm / p.i_y) +
              (d.j_total / p.i_y) * phi_dot * omega_bar;
    out[11] = ((p.i_x - p.i_y) / p.i_z) * phi_dot * theta_dot +
              (d.k_tau / p.i_z) * (w1sq - w2sq + w3sq - w4sq);
    out[12] = u[0];
    out[13] = u[1];
    out[14] = u[2];
    out[15] = u[3];
    return out;
}

// Convenience wrapper over the templated core.
std::array<double, kStateDim> derivative(const QuadState& s, const ControlInput& u,
                                         const GravityMode& mode,
                                         const DroneParams& p,
                                         const DerivedParams& d);

// Piecewise-linear control signal over time; evaluation clamps to the ends.
struct ControlProfile {
    std::vector<double> t;
    std::vector<ControlInput> u;

    static ControlProfile constant(const ControlInput& u0);
    ControlInput sample(double time) const;
};

struct ClampEvent {
    double t;
    int motor;      // 0-based
    bool at_upper;  // true: clamped to omega_max, false: to zero
};

struct Trajectory {
    std::vector<double> t;
    std::vector<QuadState> states;
    std::vector<ControlInput> controls;
    std::vector<ClampEvent> clamp_events;
};

// Fixed-step RK4. Motor speeds are clamped into [0, omega_max] after every
// step (recorded, never an error); non-finite states abort with diagnostics.
Trajectory integrate(const QuadState& s0, const ControlProfile& controls,
                     double t0, double t_end, double dt, const GravityMode& mode,
                     const DroneParams& p, const DerivedParams& d);

// Motor speed that balances weight exactly with level attitude.
double hover_omega(const DroneParams& p, const DerivedParams& d);

}  // namespace emflight
