#include "emflight/downwash.hpp"

#include <algorithm>
#include <cmath>

#include "emflight/config.hpp"

namespace emflight {

namespace {

// Quartic w^4 + a3 w^3 + a2 w^2 - c and its derivative.
struct Quartic {
    double a3, a2, c;
    double value(double w) const {
        return ((w + a3) * w + a2) * w * w - c;
    }
    double slope(double w) const {
        return ((4.0 * w + 3.0 * a3) * w + 2.0 * a2) * w;
    }
};

double bisect(const Quartic& q, double lo, double hi, int* iterations) {
    double flo = q.value(lo);
    for (int i = 0; i < 200; ++i) {
        ++*iterations;
        const double mid = 0.5 * (lo + hi);
        const double fm = q.value(mid);
        if (fm == 0.0 || hi - lo < 1e-15 * std::max(1.0, hi)) return mid;
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double angle_of_attack(double v_a, const DroneParams& p, const DerivedParams& d) {
    const double drag = 0.5 * p.rho * d.cda_sum * v_a * v_a;
    return std::atan(drag / (p.g * d.m_total));
}

QuarticSolution solve_root_downwash(double thrust, double v_a, double alpha,
                                    const DroneParams& p, const DerivedParams& d) {
    const double scale = thrust / (2.0 * p.n_rotors * p.rho * p.sigma_disk);
    const Quartic q{2.0 * v_a * std::sin(alpha), v_a * v_a, scale * scale};

    QuarticSolution sol;
    // Hover closed form is inside the basin of attraction for the whole
    // operating grid; fall back to bracketed bisection if Newton stalls.
    const double w0 = std::sqrt(scale);
    double w = w0;
    bool converged = false;
    for (int i = 0; i < 100; ++i) {
        ++sol.iterations;
        const double f = q.value(w);
        if (std::abs(f) <= 1e-12 * q.c) {
            converged = true;
            break;
        }
        const double fp = q.slope(w);
        if (fp <= 0.0 || !std::isfinite(f)) break;
        w -= f / fp;
        if (w <= 0.0) break;
    }
    if (!converged || w <= 0.0 || std::abs(q.value(w)) > 1e-10 * q.c)
        w = bisect(q, 1e-6, 10.0 * std::max(w0, 1.0), &sol.iterations);

    sol.root = w;
    sol.residual = q.value(w) / q.c;

    // The only negative coefficient is the constant term, so exactly one
    // positive real root exists; scan the negative axis for the rest.
    sol.all_real_roots.clear();
    const double span = 10.0 * std::max({w0, v_a, 1.0});
    double prev = -span;
    double fprev = q.value(prev);
    const int cells = 4000;
    for (int i = 1; i <= cells; ++i) {
        const double x = -span + span * static_cast<double>(i) / cells;
        const double fx = q.value(x);
        if (fprev == 0.0)
            sol.all_real_roots.push_back(prev);
        else if ((fprev < 0) != (fx < 0)) {
            int dummy = 0;
            sol.all_real_roots.push_back(bisect(q, prev, x, &dummy));
        }
        prev = x;
        fprev = fx;
    }
    sol.all_real_roots.push_back(w);
    std::sort(sol.all_real_roots.begin(), sol.all_real_roots.end());
    return sol;
}

double hover_downwash(double thrust, const DroneParams& p, const DerivedParams& d) {
    const double per_rotor = thrust / p.n_rotors;
    return std::sqrt(per_rotor / (2.0 * p.rho * d.a_disk));
}

double glauert_downwash(double thrust, double v_a, const DroneParams& p,
                        const DerivedParams& d) {
    if (v_a <= 0.0)
        throw ConfigError("glauert downwash is singular at zero airspeed");
    const double per_rotor = thrust / p.n_rotors;
    return per_rotor / (2.0 * p.rho * d.a_disk * v_a);
}

double downwash(DownwashMethod method, double thrust, double v_a,
                const DroneParams& p, const DerivedParams& d) {
    switch (method) {
        case DownwashMethod::Root:
            return solve_root_downwash(thrust, v_a, angle_of_attack(v_a, p, d), p, d)
                .root;
        case DownwashMethod::Hover:
            return hover_downwash(thrust, p, d);
        case DownwashMethod::Glauert:
            return glauert_downwash(thrust, v_a, p, d);
    }
    throw ConfigError("unknown downwash method");
}

const char* downwash_method_name(DownwashMethod method) {
    switch (method) {
        case DownwashMethod::Root: return "root";
        case DownwashMethod::Hover: return "hover";
        case DownwashMethod::Glauert: return "glauert";
    }
    return "?";
}

DownwashMethod downwash_method_from_name(const std::string& name) {
    if (name == "root") return DownwashMethod::Root;
    if (name == "hover") return DownwashMethod::Hover;
    if (name == "glauert") return DownwashMethod::Glauert;
    throw ConfigError("unknown downwash method '" + name +
                      "' (expected root, hover, or glauert)");
}

}  // namespace emflight
