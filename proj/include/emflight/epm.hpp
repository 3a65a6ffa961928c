#pragma once

#include <utility>
#include <vector>

#include "emflight/downwash.hpp"
#include "emflight/parallel.hpp"
#include "emflight/params.hpp"

namespace emflight {

// One cruise operating point. EPM diverges as v_a -> 0, so evaluation
// requires v_a > 0; the path angle is zero in level cruise.
struct CruiseCondition {
    double v_a = 0.0;                              // airspeed [m/s]
    double theta_path = 0.0;                       // flight path angle [rad]
    DownwashMethod method = DownwashMethod::Root;  // induced-velocity model
};

// Energy per meter with its decomposition. The four power-train components
// are stored before the transfer-efficiency division:
//   total = (induced + parasitic + profile + rotor) / eta + avionics.
struct EpmBreakdown {
    double total = 0.0;      // [J/m]
    double induced = 0.0;    // kappa T w / v
    double parasitic = 0.0;  // 0.5 rho (sum C_D A) v^2
    double profile = 0.0;    // kappa2 (m g)^1.5 / v
    double rotor = 0.0;      // kappa3 (m g)^0.5 v
    double avionics = 0.0;   // p_avio / (eta_c v)
    double thrust = 0.0;     // cruise thrust [N]
    double downwash = 0.0;   // induced velocity used [m/s]
};

// Thrust needed to hold the cruise condition. Reduces to m g at v_a = 0 and
// level path.
double cruise_thrust(const CruiseCondition& c, const DroneParams& p,
                     const DerivedParams& d);

EpmBreakdown epm(const CruiseCondition& c, const DroneParams& p,
                 const DerivedParams& d);

// Airspeed sample points v_min, v_min+step, ... up to v_max inclusive
// (within half a step). Grid must lie inside (0, 25] m/s.
struct AirspeedGrid {
    double v_min = 0.5;
    double v_max = 25.0;
    double step = 0.01;
    std::vector<double> points() const;
};

struct CurvePoint {
    double v_a;
    EpmBreakdown e;
};

// EPM over a whole grid. Serial and Parallel produce bit-identical results.
std::vector<CurvePoint> epm_curve(const DroneParams& p, const DerivedParams& d,
                                  DownwashMethod method, const AirspeedGrid& grid,
                                  ExecMode exec = ExecMode::Parallel);

struct OptimalAirspeed {
    double v_opt;    // [m/s]
    double epm_opt;  // [J/m]
};

// Exhaustive grid scan (no unimodality assumed); ties break to the smaller
// airspeed. Requires step <= 0.01 m/s.
OptimalAirspeed optimal_airspeed(const DroneParams& p, const DerivedParams& d,
                                 DownwashMethod method, const AirspeedGrid& grid,
                                 ExecMode exec = ExecMode::Parallel);

// range(v) = battery_energy / EPM(v), one pair per grid point.
std::vector<std::pair<double, double>> range_curve(
    const DroneParams& p, const DerivedParams& d, DownwashMethod method,
    double battery_energy_j, const AirspeedGrid& grid,
    ExecMode exec = ExecMode::Parallel);

}  // namespace emflight
