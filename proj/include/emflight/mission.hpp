#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emflight/regulator.hpp"
#include "emflight/trajectory_io.hpp"
#include "emflight/trajopt.hpp"

namespace emflight {

// A phase could not be completed; carries the phase tag for diagnostics.
struct PhaseError : std::runtime_error {
    PhaseError(const std::string& phase, trajopt::SolveStatus status,
               const std::string& msg)
        : std::runtime_error("phase '" + phase + "': " + msg),
          phase(phase),
          status(status) {}
    std::string phase;
    trajopt::SolveStatus status;
};

struct TrajPhaseSpec {
    trajopt::BoundaryConditions bc;
    GravityMode::Kind gravity = GravityMode::Kind::Standard;
    int nodes = 500;
};

struct CruisePhaseSpec {
    double distance_m = 0.0;
    double v0 = 11.0;  // entry speed [m/s]
    RegulatorConfig reg;
    AirspeedPlant plant;
    DownwashMethod method = DownwashMethod::Root;
    double t_end = 60.0;  // regulator settling horizon [s]
};

// Takeoff / cruise / landing composition. Any subset of phases may be
// present (at least one); they run in that order with chained boundary
// states.
struct MissionSpec {
    DroneParams drone;
    std::optional<TrajPhaseSpec> takeoff;
    std::optional<CruisePhaseSpec> cruise;
    std::optional<TrajPhaseSpec> landing;
    trajopt::SolveOptions solve_opts;
};

struct PhaseReport {
    std::string name;
    double energy_j;
    double duration_s;
    double distance_m;
};

struct MissionOutcome {
    std::vector<PhaseReport> phases;
    double total_energy_j = 0.0;
    double total_distance_m = 0.0;
    double effective_j_per_m = 0.0;

    // Cruise detail: steady state and the transient spent converging to it.
    // Transient energy is informational and not part of the phase total.
    double cruise_speed = 0.0;
    double cruise_epm = 0.0;
    double cruise_transient_j = 0.0;

    std::optional<Trajectory> takeoff_traj;
    std::optional<Trajectory> landing_traj;
    std::optional<RegulatorTrace> cruise_trace;
};

MissionOutcome run_mission(const MissionSpec& spec);

// Side-by-side downwash and EPM values for the three approximations.
// Glauert columns are blank below glauert_v_min.
std::vector<DownwashCompareRow> compare_downwash(const AirspeedGrid& grid,
                                                 const DroneParams& p,
                                                 const DerivedParams& d,
                                                 double glauert_v_min = 1.0);

}  // namespace emflight
