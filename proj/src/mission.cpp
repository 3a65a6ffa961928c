#include "emflight/mission.hpp"

#include <cmath>

#include "emflight/config.hpp"

namespace emflight {

namespace {

double displacement(const std::array<double, kStateDim>& a,
                    const std::array<double, kStateDim>& b) {
    return std::sqrt(square(b[0] - a[0]) + square(b[1] - a[1]) +
                     square(b[2] - a[2]));
}

PhaseReport solve_traj_phase(const std::string& name, const TrajPhaseSpec& phase,
                             const DroneParams& drone,
                             const trajopt::SolveOptions& opts,
                             std::optional<Trajectory>& traj_out) {
    GravityMode mode = GravityMode::standard();
    if (phase.gravity == GravityMode::Kind::Incentivized)
        mode = GravityMode::incentivized(
            {phase.bc.xf[0], phase.bc.xf[1], phase.bc.xf[2]}, drone.k_decay);
    const auto nlp = trajopt::transcribe(phase.bc, mode, drone, phase.nodes);
    const auto result = trajopt::solve(nlp, opts);
    if (result.status != trajopt::SolveStatus::Optimal)
        throw PhaseError(name, result.status,
                         std::string("optimization ended with status ") +
                             trajopt::status_name(result.status));
    traj_out = result.trajectory;
    return {name, result.energy_j, phase.bc.t_f - phase.bc.t0,
            displacement(phase.bc.x0, phase.bc.xf)};
}

}  // namespace

MissionOutcome run_mission(const MissionSpec& spec) {
    if (!spec.takeoff && !spec.cruise && !spec.landing)
        throw ConfigError("mission has no phases");
    if (spec.cruise && !(spec.cruise->distance_m > 0.0))
        throw ConfigError("cruise distance must be positive");
    // Chaining: the takeoff exit speed is the cruise entry speed.
    if (spec.takeoff && spec.cruise) {
        const auto& bc = spec.takeoff->bc;
        if (bc.xf_fixed[3] && bc.xf_fixed[4] && bc.xf_fixed[5]) {
            const double exit_speed =
                std::sqrt(square(bc.xf[3]) + square(bc.xf[4]) + square(bc.xf[5]));
            if (std::abs(exit_speed - spec.cruise->v0) > 1e-6)
                throw ConfigError(
                    "mission phases not chainable: takeoff exit speed " +
                    std::to_string(exit_speed) + " m/s != cruise entry speed " +
                    std::to_string(spec.cruise->v0) + " m/s");
        }
    }

    MissionOutcome out;
    const DerivedParams derived = derive(spec.drone);

    if (spec.takeoff)
        out.phases.push_back(solve_traj_phase("takeoff", *spec.takeoff, spec.drone,
                                              spec.solve_opts, out.takeoff_traj));

    if (spec.cruise) {
        const auto& c = *spec.cruise;
        RegulatorTrace trace =
            simulate(c.reg, c.plant, c.v0, c.t_end, spec.drone, c.method);
        const TraceSample& last = trace.samples.back();
        out.cruise_speed = last.v_a;
        out.cruise_epm = last.epm;

        // Energy spent while the regulator homes in, integrated as
        // EPM(v) * v over the settling window; reported, not totalled.
        double transient = 0.0;
        double settle_t = last.t;
        for (const auto& s : trace.samples)
            if (std::abs(s.v_a - last.v_a) > 0.05) settle_t = s.t;
        for (std::size_t k = 0; k + 1 < trace.samples.size(); ++k) {
            const auto& a = trace.samples[k];
            const auto& b = trace.samples[k + 1];
            if (a.t > settle_t) break;
            transient += 0.5 * (b.t - a.t) * (a.epm * a.v_a + b.epm * b.v_a);
        }
        out.cruise_transient_j = transient;
        out.cruise_trace = std::move(trace);

        out.phases.push_back({"cruise", out.cruise_epm * c.distance_m,
                              c.distance_m / out.cruise_speed, c.distance_m});
    }

    if (spec.landing)
        out.phases.push_back(solve_traj_phase("landing", *spec.landing, spec.drone,
                                              spec.solve_opts, out.landing_traj));

    for (const auto& ph : out.phases) {
        out.total_energy_j += ph.energy_j;
        out.total_distance_m += ph.distance_m;
    }
    out.effective_j_per_m =
        out.total_distance_m > 0.0 ? out.total_energy_j / out.total_distance_m : 0.0;
    (void)derived;
    return out;
}

std::vector<DownwashCompareRow> compare_downwash(const AirspeedGrid& grid,
                                                 const DroneParams& p,
                                                 const DerivedParams& d,
                                                 double glauert_v_min) {
    std::vector<DownwashCompareRow> rows;
    for (const double v : grid.points()) {
        DownwashCompareRow r{};
        r.v = v;
        const EpmBreakdown root = epm({v, 0.0, DownwashMethod::Root}, p, d);
        const EpmBreakdown hover = epm({v, 0.0, DownwashMethod::Hover}, p, d);
        r.w_root = root.downwash;
        r.w_hover = hover.downwash;
        r.epm_root = root.total;
        r.epm_hover = hover.total;
        r.glauert_valid = v >= glauert_v_min;
        if (r.glauert_valid) {
            const EpmBreakdown gl = epm({v, 0.0, DownwashMethod::Glauert}, p, d);
            r.w_glauert = gl.downwash;
            r.epm_glauert = gl.total;
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace emflight
