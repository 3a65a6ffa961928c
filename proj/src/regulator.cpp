#include "emflight/regulator.hpp"

#include <algorithm>
#include <cmath>

#include "emflight/config.hpp"

namespace emflight {

double AirspeedPlant::step(double v, double v_cmd, double dt) const {
    double rate = (v_cmd - v) / tau;
    rate = std::clamp(rate, -rate_limit, rate_limit);
    return v + dt * rate;
}

double epm_gradient(double v_a, double delta_v, const DroneParams& p,
                    const DerivedParams& d, DownwashMethod method) {
    if (!(v_a > 0.0) || !(delta_v > 0.0))
        throw ConfigError("epm_gradient requires v_a > 0 and delta_v > 0");
    const double here = epm({v_a, 0.0, method}, p, d).total;
    const double ahead = epm({v_a + delta_v, 0.0, method}, p, d).total;
    return (ahead - here) / delta_v;
}

double pid_command(double v_a, double grad, double grad_rate,
                   double grad_integral, const RegulatorConfig& cfg) {
    return v_a - (cfg.kp * grad + cfg.kd * grad_rate + cfg.ki * grad_integral);
}

StepResult regulator_step(const RegulatorState& s, const RegulatorConfig& cfg,
                          const DroneParams& p, const DerivedParams& d,
                          DownwashMethod method) {
    StepResult r;
    r.epm_value = epm({s.v_a, 0.0, method}, p, d).total;
    r.grad = epm_gradient(s.v_a, cfg.delta_v, p, d, method);

    const double limit = cfg.integral_limit();
    double integral = s.grad_integral + r.grad * cfg.dt;
    integral = std::clamp(integral, -limit, limit);
    const double deriv = s.have_prev_grad ? (r.grad - s.prev_grad) / cfg.dt : 0.0;

    r.v_cmd = pid_command(s.v_a, r.grad, deriv, integral, cfg);

    r.state = s;
    r.state.grad_integral = integral;
    r.state.prev_grad = r.grad;
    r.state.have_prev_grad = true;
    return r;
}

RegulatorTrace simulate(const RegulatorConfig& cfg, const AirspeedPlant& plant,
                        double v0, double t_end, const DroneParams& p,
                        DownwashMethod method,
                        const std::vector<ParamEvent>& schedule) {
    if (!(v0 > 0.0)) throw ConfigError("simulate requires v0 > 0");
    if (!(t_end > cfg.trigger_time))
        throw ConfigError("simulate requires t_end > trigger_time");
    if (!(cfg.kp > 0.0) || cfg.ki < 0.0 || cfg.kd < 0.0)
        throw ConfigError("regulator gains must satisfy kp > 0, ki >= 0, kd >= 0");

    DroneParams params = p;
    DerivedParams derived = derive(params);
    std::size_t next_event = 0;

    RegulatorTrace trace;
    const int steps = static_cast<int>(std::ceil(t_end / cfg.dt));
    trace.samples.reserve(steps + 1);

    RegulatorState s;
    s.v_a = v0;
    for (int k = 0; k <= steps; ++k) {
        s.t = k * cfg.dt;
        while (next_event < schedule.size() && schedule[next_event].t <= s.t) {
            params = schedule[next_event].params;
            derived = derive(params);
            ++next_event;
        }

        double v_cmd, grad, epm_here;
        if (s.t >= cfg.trigger_time) {
            const StepResult r = regulator_step(s, cfg, params, derived, method);
            v_cmd = r.v_cmd;
            grad = r.grad;
            epm_here = r.epm_value;
            s = r.state;
        } else {
            v_cmd = s.v_a;
            grad = epm_gradient(s.v_a, cfg.delta_v, params, derived, method);
            epm_here = epm({s.v_a, 0.0, method}, params, derived).total;
        }
        trace.samples.push_back({s.t, s.v_a, epm_here, grad, v_cmd});
        s.v_a = plant.step(s.v_a, v_cmd, cfg.dt);
    }
    return trace;
}

}  // namespace emflight
