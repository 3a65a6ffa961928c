#include "emflight/epm.hpp"

#include <cmath>

#include "emflight/config.hpp"

namespace emflight {

double cruise_thrust(const CruiseCondition& c, const DroneParams& p,
                     const DerivedParams& d) {
    const double weight = p.g * d.m_total;
    const double drag = 0.5 * p.rho * d.cda_sum * c.v_a * c.v_a;
    const double radicand =
        weight * weight + drag * drag + 2.0 * drag * weight * std::sin(c.theta_path);
    if (radicand < 0.0)
        throw ConfigError("invalid cruise condition: negative thrust radicand");
    return std::sqrt(radicand);
}

EpmBreakdown epm(const CruiseCondition& c, const DroneParams& p,
                 const DerivedParams& d) {
    if (c.v_a <= 0.0)
        throw ConfigError("EPM requires airspeed > 0");
    const double weight = p.g * d.m_total;
    EpmBreakdown b;
    b.thrust = cruise_thrust(c, p, d);
    b.downwash = downwash(c.method, b.thrust, c.v_a, p, d);
    b.induced = p.kappa * b.thrust * b.downwash / c.v_a;
    b.parasitic = 0.5 * p.rho * d.cda_sum * c.v_a * c.v_a;
    b.profile = p.kappa2 * weight * std::sqrt(weight) / c.v_a;
    b.rotor = p.kappa3 * std::sqrt(weight) * c.v_a;
    b.avionics = p.p_avio / (p.eta_c * c.v_a);
    b.total = (b.induced + b.parasitic + b.profile + b.rotor) / p.eta + b.avionics;
    return b;
}

std::vector<double> AirspeedGrid::points() const {
    if (!(step > 0.0)) throw ConfigError("airspeed grid: step must be positive");
    if (!(v_min > 0.0) || v_max > 25.0 || v_min > v_max)
        throw ConfigError("airspeed grid must lie inside (0, 25] m/s");
    std::vector<double> pts;
    const int n = static_cast<int>(std::floor((v_max - v_min) / step + 0.5));
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double v = v_min + i * step;
        if (v <= v_max + 0.5 * step) pts.push_back(v);
    }
    return pts;
}

std::vector<CurvePoint> epm_curve(const DroneParams& p, const DerivedParams& d,
                                  DownwashMethod method, const AirspeedGrid& grid,
                                  ExecMode exec) {
    const std::vector<double> vs = grid.points();
    std::vector<CurvePoint> out(vs.size());
    const auto eval = [&](int i) {
        out[i].v_a = vs[i];
        out[i].e = epm({vs[i], 0.0, method}, p, d);
    };
    const int n = static_cast<int>(vs.size());
    if (exec == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) eval(i);
    } else {
        for (int i = 0; i < n; ++i) eval(i);
    }
    return out;
}

OptimalAirspeed optimal_airspeed(const DroneParams& p, const DerivedParams& d,
                                 DownwashMethod method, const AirspeedGrid& grid,
                                 ExecMode exec) {
    if (grid.step > 0.01 + 1e-12)
        throw ConfigError("optimal_airspeed requires grid step <= 0.01 m/s");
    const auto curve = epm_curve(p, d, method, grid, exec);
    if (curve.empty()) throw ConfigError("optimal_airspeed: empty grid");
    // Reduction stays serial so the result never depends on thread count.
    const CurvePoint* best = &curve.front();
    for (const auto& pt : curve)
        if (pt.e.total < best->e.total) best = &pt;
    return {best->v_a, best->e.total};
}

std::vector<std::pair<double, double>> range_curve(
    const DroneParams& p, const DerivedParams& d, DownwashMethod method,
    double battery_energy_j, const AirspeedGrid& grid, ExecMode exec) {
    if (!(battery_energy_j > 0.0))
        throw ConfigError("range_curve: battery energy must be positive");
    const auto curve = epm_curve(p, d, method, grid, exec);
    std::vector<std::pair<double, double>> out;
    out.reserve(curve.size());
    for (const auto& pt : curve)
        out.emplace_back(pt.v_a, battery_energy_j / pt.e.total);
    return out;
}

}  // namespace emflight
