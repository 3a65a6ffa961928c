#include "emflight/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "emflight/config.hpp"

namespace emflight {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

}  // namespace

std::string format_csv_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const DroneParams& p, const DerivedParams& d) {
    const TrajectoryEnergy e = trajectory_energy(traj, p, d);
    auto out = open_out(path);
    out << "t,x,y,z,vx,vy,vz,phi,theta,psi,phidot,thetadot,psidot,"
           "omega1,omega2,omega3,omega4,power_total,power_m1,power_m2,"
           "power_m3,power_m4\n";
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const auto s = traj.states[k].to_array();
        out << format_csv_value(traj.t[k]);
        for (const double v : s) out << ',' << format_csv_value(v);
        out << ',' << format_csv_value(e.power_total[k]);
        for (int m = 0; m < 4; ++m)
            out << ',' << format_csv_value(e.power_motor[m][k]);
        out << '\n';
    }
}

void write_epm_curve_csv(const std::string& path,
                         const std::vector<CurvePoint>& curve) {
    auto out = open_out(path);
    out << "v_a,total,induced,parasitic,profile,rotor,avionics,thrust,downwash\n";
    for (const auto& pt : curve) {
        out << format_csv_value(pt.v_a) << ',' << format_csv_value(pt.e.total)
            << ',' << format_csv_value(pt.e.induced) << ','
            << format_csv_value(pt.e.parasitic) << ','
            << format_csv_value(pt.e.profile) << ','
            << format_csv_value(pt.e.rotor) << ','
            << format_csv_value(pt.e.avionics) << ','
            << format_csv_value(pt.e.thrust) << ','
            << format_csv_value(pt.e.downwash) << '\n';
    }
}

void write_regulator_trace_csv(const std::string& path,
                               const RegulatorTrace& trace) {
    auto out = open_out(path);
    out << "t,v_a,epm,grad_epm,v_cmd\n";
    for (const auto& s : trace.samples) {
        out << format_csv_value(s.t) << ',' << format_csv_value(s.v_a) << ','
            << format_csv_value(s.epm) << ',' << format_csv_value(s.grad_epm)
            << ',' << format_csv_value(s.v_cmd) << '\n';
    }
}

void write_downwash_compare_csv(const std::string& path,
                                const std::vector<DownwashCompareRow>& rows) {
    auto out = open_out(path);
    out << "v,w_R,w_H,w_G,EPM_R,EPM_H,EPM_G\n";
    for (const auto& r : rows) {
        out << format_csv_value(r.v) << ',' << format_csv_value(r.w_root) << ','
            << format_csv_value(r.w_hover) << ',';
        if (r.glauert_valid) out << format_csv_value(r.w_glauert);
        out << ',' << format_csv_value(r.epm_root) << ','
            << format_csv_value(r.epm_hover) << ',';
        if (r.glauert_valid) out << format_csv_value(r.epm_glauert);
        out << '\n';
    }
}

void write_sweep_csv(const std::string& path,
                     const std::vector<trajopt::SweepRow>& rows) {
    auto out = open_out(path);
    out << "t_f,mode,energy_J,status\n";
    for (const auto& r : rows) {
        out << format_csv_value(r.t_f) << ','
            << (r.mode == GravityMode::Kind::Incentivized ? "incentivized"
                                                          : "standard")
            << ',';
        if (std::isfinite(r.energy_j)) out << format_csv_value(r.energy_j);
        out << ',' << trajopt::status_name(r.status) << '\n';
    }
}

}  // namespace emflight
