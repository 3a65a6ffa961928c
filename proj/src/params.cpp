#include "emflight/params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <vector>

#include "emflight/config.hpp"

namespace emflight {

namespace {

struct FieldRef {
    const char* name;
    double DroneParams::* member;
};

// Every double field, in declaration order. Integer fields handled apart.
const std::vector<FieldRef>& double_fields() {
    static const std::vector<FieldRef> fields = {
        {"rho", &DroneParams::rho},
        {"g", &DroneParams::g},
        {"eta", &DroneParams::eta},
        {"eta_c", &DroneParams::eta_c},
        {"kappa", &DroneParams::kappa},
        {"kappa2", &DroneParams::kappa2},
        {"kappa3", &DroneParams::kappa3},
        {"p_avio", &DroneParams::p_avio},
        {"s_batt", &DroneParams::s_batt},
        {"f_safety", &DroneParams::f_safety},
        {"gamma_depth", &DroneParams::gamma_depth},
        {"eps_blade_offset", &DroneParams::eps_blade_offset},
        {"m_blade", &DroneParams::m_blade},
        {"r_prop", &DroneParams::r_prop},
        {"sigma_disk", &DroneParams::sigma_disk},
        {"l_arm", &DroneParams::l_arm},
        {"m1", &DroneParams::m1},
        {"m2", &DroneParams::m2},
        {"m3", &DroneParams::m3},
        {"cd1", &DroneParams::cd1},
        {"cd2", &DroneParams::cd2},
        {"cd3", &DroneParams::cd3},
        {"a1", &DroneParams::a1},
        {"a2", &DroneParams::a2},
        {"a3", &DroneParams::a3},
        {"c_t", &DroneParams::c_t},
        {"c_q", &DroneParams::c_q},
        {"j_m", &DroneParams::j_m},
        {"i_x", &DroneParams::i_x},
        {"i_y", &DroneParams::i_y},
        {"i_z", &DroneParams::i_z},
        {"k_decay", &DroneParams::k_decay},
        {"k_t_motor", &DroneParams::k_t_motor},
        {"t_f_friction", &DroneParams::t_f_friction},
        {"r_winding", &DroneParams::r_winding},
        {"d_f", &DroneParams::d_f},
        {"omega_max", &DroneParams::omega_max},
    };
    return fields;
}

void check(bool ok, const char* field, const char* rule) {
    if (!ok)
        throw ConfigError(std::string("parameter '") + field + "' violates: " + rule);
}

}  // namespace

DroneParams default_drone() { return DroneParams{}; }

DerivedParams derive(const DroneParams& p) {
    DerivedParams d{};
    d.m_total = p.m1 + p.m2 + p.m3;
    d.a_disk = std::numbers::pi * p.r_prop * p.r_prop;
    d.k_b = p.c_t * p.rho * d.a_disk * p.r_prop * p.r_prop;
    d.k_tau = p.c_q * p.rho * d.a_disk * p.r_prop * p.r_prop * p.r_prop;
    d.j_l = 0.25 * p.n_blades * p.m_blade *
            (p.r_prop - p.eps_blade_offset) * (p.r_prop - p.eps_blade_offset);
    d.j_total = p.j_m + d.j_l;
    d.cda_sum = p.cd1 * p.a1 + p.cd2 * p.a2 + p.cd3 * p.a3;
    return d;
}

double kappa2_from_disk(const DroneParams& p) {
    return std::sqrt(2.0 * p.rho * std::numbers::pi * p.r_prop * p.r_prop);
}

void validate(const DroneParams& p) {
    check(p.rho > 0, "rho", "strictly positive");
    check(p.g > 0, "g", "strictly positive");
    check(p.eta > 0 && p.eta <= 1, "eta", "in (0, 1]");
    check(p.eta_c > 0 && p.eta_c <= 1, "eta_c", "in (0, 1]");
    check(p.kappa >= 1, "kappa", ">= 1");
    check(p.kappa2 > 0, "kappa2", "strictly positive");
    check(p.kappa3 > 0, "kappa3", "strictly positive");
    check(p.p_avio >= 0, "p_avio", "non-negative");
    check(p.n_rotors > 0, "n_rotors", "strictly positive");
    check(p.n_blades > 0, "n_blades", "strictly positive");
    check(p.eps_blade_offset >= 0, "eps_blade_offset", "non-negative");
    check(p.m_blade > 0, "m_blade", "strictly positive");
    check(p.r_prop > 0, "r_prop", "strictly positive");
    check(p.sigma_disk > 0, "sigma_disk", "strictly positive");
    check(p.l_arm > 0, "l_arm", "strictly positive");
    check(p.m1 > 0, "m1", "strictly positive");
    check(p.m2 > 0, "m2", "strictly positive");
    check(p.m3 >= 0, "m3", "non-negative");
    check(p.cd1 > 0, "cd1", "strictly positive");
    check(p.cd2 > 0, "cd2", "strictly positive");
    check(p.cd3 > 0, "cd3", "strictly positive");
    check(p.a1 > 0, "a1", "strictly positive");
    check(p.a2 > 0, "a2", "strictly positive");
    check(p.a3 > 0, "a3", "strictly positive");
    check(p.c_t > 0, "c_t", "strictly positive");
    check(p.c_q > 0, "c_q", "strictly positive");
    check(p.j_m > 0, "j_m", "strictly positive");
    check(p.i_x > 0, "i_x", "strictly positive");
    check(p.i_y > 0, "i_y", "strictly positive");
    check(p.i_z > 0, "i_z", "strictly positive");
    check(p.k_decay > 0, "k_decay", "strictly positive");
    check(p.k_t_motor > 0, "k_t_motor", "strictly positive");
    check(p.t_f_friction >= 0, "t_f_friction", "non-negative");
    check(p.r_winding > 0, "r_winding", "strictly positive");
    check(p.d_f >= 0, "d_f", "non-negative");
    check(p.omega_max > 0, "omega_max", "strictly positive");
}

DroneParams load_params(const std::string& path) {
    const Config cfg = Config::parse_file(path);
    DroneParams p;
    for (const auto& key : cfg.keys("")) {
        bool known = false;
        for (const auto& f : double_fields()) {
            if (key == f.name) {
                p.*(f.member) = cfg.get_double("", key);
                known = true;
                break;
            }
        }
        if (key == "n_rotors") {
            p.n_rotors = cfg.get_int("", key, p.n_rotors);
            known = true;
        } else if (key == "n_blades") {
            p.n_blades = cfg.get_int("", key, p.n_blades);
            known = true;
        }
        if (!known)
            throw ConfigError(path + ": unknown parameter '" + key + "'");
    }
    validate(p);
    return p;
}

void save_params(const std::string& path, const DroneParams& p) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write parameter file '" + path + "'");
    out << "# drone parameter set, SI units\n";
    out << "n_rotors = " << p.n_rotors << "\n";
    out << "n_blades = " << p.n_blades << "\n";
    char buf[64];
    for (const auto& f : double_fields()) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.*(f.member));
        out << f.name << " = " << buf << "\n";
    }
}

}  // namespace emflight
