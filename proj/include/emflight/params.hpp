#pragma once

#include <string>

namespace emflight {

// Full physical/electrical description of one drone plus the environment
// constants the energy model needs. Immutable after construction; safe to
// share across threads. Defaults describe the reference quadrotor.
struct DroneParams {
    // Environment and energy-model constants
    double rho = 1.225;        // air density [kg/m^3]
    double g = 9.807;          // gravitational acceleration [m/s^2]
    double eta = 0.7;          // battery-to-propeller power transfer efficiency
    double eta_c = 1.0;        // battery charging efficiency
    double kappa = 1.15;       // induced-power up-scaling factor
    double kappa2 = 0.790;     // profile power factor [(m/kg)^0.5]
    double kappa3 = 0.0042;    // thrust-rotor-speed scaling factor [(m/kg)^-0.5]
    double p_avio = 0.0;       // avionics power draw [W]

    // Battery sizing registry; carried for completeness, used by no model here
    double s_batt = 540000.0;  // specific energy of battery [J/kg]
    double f_safety = 1.2;     // safety factor of battery
    double gamma_depth = 0.5;  // depth of charge of battery

    // Airframe geometry and masses
    int n_rotors = 4;
    int n_blades = 4;                // blades per rotor
    double eps_blade_offset = 0.004; // blade root to motor hub offset [m]
    double m_blade = 0.0055;         // mass of one blade [kg]
    double r_prop = 0.127;           // propeller radius [m]
    double sigma_disk = 0.0507;      // spinning area of one rotor [m^2]
    double l_arm = 0.175;            // rotor to centre-of-mass distance [m]
    double m1 = 1.07;                // body mass [kg]
    double m2 = 1.0;                 // battery mass [kg]
    double m3 = 0.5;                 // payload mass [kg]
    double cd1 = 1.49;               // body drag coefficient
    double cd2 = 1.0;                // battery drag coefficient
    double cd3 = 2.2;                // payload drag coefficient
    double a1 = 0.0599;              // body projected area [m^2]
    double a2 = 0.0037;              // battery projected area [m^2]
    double a3 = 0.0135;              // payload projected area [m^2]
    double c_t = 0.0048;             // propeller thrust coefficient
    double c_q = 0.00023515;         // propeller torque coefficient

    // Rigid-body inertia
    double j_m = 4.9e-6;  // motor moment of inertia [kg m^2]
    double i_x = 0.081;   // body inertia, x [kg m^2]
    double i_y = 0.081;   // body inertia, y [kg m^2]
    double i_z = 0.142;   // body inertia, z [kg m^2]

    double k_decay = 3.0;  // landing-incentive decay rate [1/m^2]

    // Motor electrical model
    double k_t_motor = 0.01038;   // torque constant [V s/rad]
    double t_f_friction = 4e-2;   // friction torque [N m]
    double r_winding = 0.2;       // phase winding resistance [ohm]
    double d_f = 2e-4;            // viscous damping coefficient [N m s/rad]
    double omega_max = 1200.0;    // maximum motor angular velocity [rad/s]
};

// Quantities recomputable from DroneParams; pure function of the inputs.
struct DerivedParams {
    double m_total;   // m1 + m2 + m3 [kg]
    double a_disk;    // pi r^2, one propeller [m^2]
    double k_b;       // thrust factor, F_i = k_b w_i^2 [N s^2/rad^2]
    double k_tau;     // drag factor, M_i = k_tau w_i^2 [N m s^2/rad^2]
    double j_l;       // load moment of inertia [kg m^2]
    double j_total;   // j_m + j_l [kg m^2]
    double cda_sum;   // sum of C_Dk * A_k [m^2]
};

// The reference drone: every tabulated constant loaded.
DroneParams default_drone();

DerivedParams derive(const DroneParams& p);

// Profile power factor from disk loading, sqrt(2 rho A). Tabulated kappa2
// (0.790) disagrees with this formula (~0.352 for the default drone); the
// tabulated value is canonical for EPM evaluation, this is the alternative.
double kappa2_from_disk(const DroneParams& p);

// Throws ConfigError naming the offending field if an invariant fails.
void validate(const DroneParams& p);

// Flat key-value file, keys identical to the field names above, SI units.
// Missing keys fall back to defaults; unknown keys are an error.
DroneParams load_params(const std::string& path);
void save_params(const std::string& path, const DroneParams& p);

}  // namespace emflight
