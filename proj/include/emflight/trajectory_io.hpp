#pragma once

#include <string>
#include <vector>

#include "emflight/epm.hpp"
#include "emflight/motor_energy.hpp"
#include "emflight/regulator.hpp"
#include "emflight/trajopt.hpp"

namespace emflight {

// Simple CSV emission with fixed "%.10g" formatting so identical runs give
// byte-identical files.
std::string format_csv_value(double v);

// t,x,y,z,vx,vy,vz,phi,theta,psi,phidot,thetadot,psidot,omega1..4,
// power_total,power_m1..4
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const DroneParams& p, const DerivedParams& d);

// v_a,total,induced,parasitic,profile,rotor,avionics,thrust,downwash
void write_epm_curve_csv(const std::string& path,
                         const std::vector<CurvePoint>& curve);

// t,v_a,epm,grad_epm,v_cmd
void write_regulator_trace_csv(const std::string& path,
                               const RegulatorTrace& trace);

struct DownwashCompareRow {
    double v;
    double w_root, w_hover, w_glauert;
    double epm_root, epm_hover, epm_glauert;
    bool glauert_valid;  // false below the configured cutoff; cells left blank
};

// v,w_R,w_H,w_G,EPM_R,EPM_H,EPM_G
void write_downwash_compare_csv(const std::string& path,
                                const std::vector<DownwashCompareRow>& rows);

// t_f,mode,energy_J,status
void write_sweep_csv(const std::string& path,
                     const std::vector<trajopt::SweepRow>& rows);

}  // namespace emflight
