#pragma once

#include <limits>
#include <vector>

#include "emflight/epm.hpp"

namespace emflight {

// Extremum-seeking PID gains and timing. The perturbation delta_v is the
// forward-difference probe width of the EPM gradient estimate.
struct RegulatorConfig {
    double kp = 0.2;     // [m/s per J/m^2]
    double ki = 0.03;    // [m/s per J s/m^2]
    double kd = 0.002;   // [m/s per J/(m^2 s)]
    double delta_v = 0.1;       // gradient probe [m/s]
    double dt = 0.05;           // control period [s]
    double trigger_time = 4.0;  // controller inactive before this [s]
    // Integral clamp: ten times the accumulation that alone would command a
    // 5 m/s change. Unlimited when ki == 0.
    double anti_windup_limit = std::numeric_limits<double>::infinity();

    double integral_limit() const {
        if (anti_windup_limit != std::numeric_limits<double>::infinity())
            return anti_windup_limit;
        return ki > 0.0 ? 10.0 * 5.0 / ki : std::numeric_limits<double>::infinity();
    }
};

// First-order lag airspeed response with an optional rate limit. The
// regulator never sees these internals.
struct AirspeedPlant {
    double tau = 0.5;  // time constant [s]
    double rate_limit = std::numeric_limits<double>::infinity();  // [m/s^2]

    double step(double v, double v_cmd, double dt) const;
};

struct RegulatorState {
    double v_a = 0.0;           // measured airspeed [m/s]
    double grad_integral = 0.0; // accumulated gradient [J/m^2 * s]
    double prev_grad = 0.0;
    bool have_prev_grad = false;
    double t = 0.0;
};

struct TraceSample {
    double t;
    double v_a;
    double epm;       // [J/m]
    double grad_epm;  // [J/m per m/s]
    double v_cmd;     // [m/s]
};

struct RegulatorTrace {
    std::vector<TraceSample> samples;
};

// Forward one-sided EPM slope estimate, (EPM(v+dv) - EPM(v)) / dv.
double epm_gradient(double v_a, double delta_v, const DroneParams& p,
                    const DerivedParams& d, DownwashMethod method);

// The PID map itself: v - (kp g + kd dg/dt + ki int g). Pure.
double pid_command(double v_a, double grad, double grad_rate,
                   double grad_integral, const RegulatorConfig& cfg);

struct StepResult {
    RegulatorState state;
    double v_cmd;
    double grad;
    double epm_value;
};

// One PID update at the current airspeed. Derivative acts on the gradient
// signal by backward difference; first call after trigger uses none.
StepResult regulator_step(const RegulatorState& s, const RegulatorConfig& cfg,
                          const DroneParams& p, const DerivedParams& d,
                          DownwashMethod method);

// Swap the drone parameters mid-run (payload drop, density change, ...).
struct ParamEvent {
    double t;
    DroneParams params;
};

// Closed loop against the plant from v0 until t_end. Samples every cfg.dt;
// before the trigger the command simply holds the measured airspeed.
RegulatorTrace simulate(const RegulatorConfig& cfg, const AirspeedPlant& plant,
                        double v0, double t_end, const DroneParams& p,
                        DownwashMethod method,
                        const std::vector<ParamEvent>& schedule = {});

}  // namespace emflight
