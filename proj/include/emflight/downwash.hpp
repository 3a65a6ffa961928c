#pragma once

#include <vector>

#include "emflight/params.hpp"

namespace emflight {

enum class DownwashMethod { Root, Hover, Glauert };

// Positive real root of the induced-velocity quartic plus solve diagnostics.
struct QuarticSolution {
    double root = 0.0;       // induced velocity [m/s]
    double residual = 0.0;   // quartic residual at root / (T/(2 n rho sigma))^2
    int iterations = 0;
    std::vector<double> all_real_roots;  // every real root, ascending
};

// Angle of attack of the rotor disk, arctan(drag / weight). Zero at hover,
// approaches pi/2 as airspeed grows.
double angle_of_attack(double v_a, const DroneParams& p, const DerivedParams& d);

// Momentum-theory induced velocity in forward flight: the unique positive
// real root of
//   w^4 + 2 w^3 v sin(a) + w^2 v^2 - (T/(2 n rho sigma))^2 = 0
// with T the total thrust. Newton iteration seeded at the hover closed form,
// bisection fallback on a bracketing interval.
QuarticSolution solve_root_downwash(double thrust, double v_a, double alpha,
                                    const DroneParams& p, const DerivedParams& d);

// Hover momentum theory, per-rotor thrust share over per-rotor disk area.
// Independent of airspeed.
double hover_downwash(double thrust, const DroneParams& p, const DerivedParams& d);

// High-speed approximation, same per-rotor convention. Singular at v_a = 0;
// throws ConfigError there.
double glauert_downwash(double thrust, double v_a, const DroneParams& p,
                        const DerivedParams& d);

// Dispatch on method. Root recomputes the angle of attack internally.
double downwash(DownwashMethod method, double thrust, double v_a,
                const DroneParams& p, const DerivedParams& d);

const char* downwash_method_name(DownwashMethod method);
DownwashMethod downwash_method_from_name(const std::string& name);

}  // namespace emflight
