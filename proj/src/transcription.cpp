#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "emflight/config.hpp"
#include "emflight/dual.hpp"
#include "emflight/trajopt.hpp"

namespace emflight::trajopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kOmega0 = 12;  // first motor-speed dimension

using Node = Eigen::Matrix<double, kNodeDim, 1>;

}  // namespace

BoundaryConditions BoundaryConditions::takeoff() {
    BoundaryConditions bc;
    bc.x0 = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 912.32, 912.32, 912.32, 912.32};
    bc.xf = {200.0, 0, 200.0, 11.0, 0, 0, 0, 0.3, 0, 0, 0, 0,
             1172.3, 1172.3, 1172.3, 1172.3};
    bc.xf_fixed.fill(true);
    bc.t0 = 0.0;
    bc.t_f = 22.0;
    return bc;
}

BoundaryConditions BoundaryConditions::landing() {
    BoundaryConditions bc;
    bc.x0 = {5870.21, 0, 200.0, 11.0, 0, 0, 0, 0.3, 0, 0, 0, 0,
             1172.3, 1172.3, 1172.3, 1172.3};
    bc.xf = {6070.21, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    bc.xf_fixed.fill(true);
    bc.t0 = 0.0;
    bc.t_f = 22.0;
    return bc;
}

NlpProblem transcribe(const BoundaryConditions& bc, const GravityMode& mode,
                      const DroneParams& p, int nodes) {
    if (nodes < 10) throw ConfigError("transcribe: need at least 10 nodes");
    if (!(bc.t_f > bc.t0)) throw ConfigError("transcribe: t_f must exceed t0");

    NlpProblem nlp;
    nlp.nodes = nodes;
    nlp.t0 = bc.t0;
    nlp.tf = bc.t_f;
    nlp.h = (bc.t_f - bc.t0) / (nodes - 1);
    nlp.params = p;
    nlp.derived = derive(p);
    nlp.power = MotorPowerCoefficients::from(p, nlp.derived);
    nlp.bc = bc;

    // The incentive only lets the optimizer park early when the final
    // velocity is zero; warn when it is combined with a moving endpoint.
    if (mode.kind == GravityMode::Kind::Incentivized) {
        for (int i = 3; i < 6; ++i) {
            if (bc.xf_fixed[i] && bc.xf[i] != 0.0) {
                std::fprintf(stderr,
                             "warning: incentivized gravity with nonzero fixed "
                             "final velocity (%s = %g); expect energy-inflated "
                             "solutions\n",
                             state_component_names()[i], bc.xf[i]);
                break;
            }
        }
    }

    // Internal frame: put the incentive target (or else the start position)
    // at the origin so position magnitudes stay small.
    if (mode.kind == GravityMode::Kind::Incentivized)
        nlp.frame_shift = mode.target;
    else
        nlp.frame_shift = {bc.x0[0], bc.x0[1], bc.x0[2]};
    nlp.mode = mode;
    for (int i = 0; i < 3; ++i) nlp.mode.target[i] = mode.target[i] - nlp.frame_shift[i];

    nlp.state_scale = {50, 50, 50, 10, 10, 10, 0.5, 0.5, 0.5, 1, 1, 1,
                       p.omega_max, p.omega_max, p.omega_max, p.omega_max};
    nlp.control_scale = p.omega_max / 2.0;
    nlp.obj_scale = 0.01;

    const int n = nlp.n_vars();
    nlp.lower = Eigen::VectorXd::Constant(n, -kInf);
    nlp.upper = Eigen::VectorXd::Constant(n, kInf);
    const double ang_bound = std::numbers::pi / 10.0;
    for (int k = 0; k < nodes; ++k) {
        // z >= 0 (physical), attitude corridor, motor speed range
        nlp.lower[nlp.var(k, 2)] = (0.0 - nlp.frame_shift[2]) / nlp.state_scale[2];
        nlp.lower[nlp.var(k, 6)] = -ang_bound / nlp.state_scale[6];
        nlp.upper[nlp.var(k, 6)] = ang_bound / nlp.state_scale[6];
        nlp.lower[nlp.var(k, 7)] = -ang_bound / nlp.state_scale[7];
        nlp.upper[nlp.var(k, 7)] = ang_bound / nlp.state_scale[7];
        for (int m = 0; m < 4; ++m) {
            nlp.lower[nlp.var(k, kOmega0 + m)] = 0.0;
            nlp.upper[nlp.var(k, kOmega0 + m)] =
                p.omega_max / nlp.state_scale[kOmega0 + m];
        }
    }
    // Boundary equalities: pin the variable.
    for (int i = 0; i < kStateDim; ++i) {
        const double shift = i < 3 ? nlp.frame_shift[i] : 0.0;
        const double v0 = (bc.x0[i] - shift) / nlp.state_scale[i];
        nlp.lower[nlp.var(0, i)] = v0;
        nlp.upper[nlp.var(0, i)] = v0;
        if (bc.xf_fixed[i]) {
            const double vf = (bc.xf[i] - shift) / nlp.state_scale[i];
            nlp.lower[nlp.var(nodes - 1, i)] = vf;
            nlp.upper[nlp.var(nodes - 1, i)] = vf;
        }
    }
    return nlp;
}

double NlpProblem::objective_physical(const Eigen::VectorXd& x) const {
    double total = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double q = quad_weight(k);
        double node_power = 0.0;
        for (int m = 0; m < 4; ++m) {
            const double w = x[var(k, kOmega0 + m)] * state_scale[kOmega0 + m];
            const double a = x[var(k, kStateDim + m)] * control_scale;
            node_power += power.c0 +
                          w * (power.c1 + w * (power.c2 + w * (power.c3 + w * power.c4))) +
                          power.c_accel * a * a;
        }
        total += q * node_power;
    }
    return total;
}

double NlpProblem::objective_scaled(const Eigen::VectorXd& x) const {
    return obj_scale * objective_physical(x);
}

void NlpProblem::objective_derivatives(const Eigen::VectorXd& x,
                                       Eigen::VectorXd& grad,
                                       Eigen::VectorXd& hess_diag) const {
    grad.setZero(n_vars());
    hess_diag.setZero(n_vars());
    for (int k = 0; k < nodes; ++k) {
        const double q = quad_weight(k) * obj_scale;
        for (int m = 0; m < 4; ++m) {
            const int iw = var(k, kOmega0 + m);
            const int ia = var(k, kStateDim + m);
            const double sw = state_scale[kOmega0 + m];
            const double w = x[iw] * sw;
            const double a = x[ia] * control_scale;
            const double dPdw =
                power.c1 + w * (2.0 * power.c2 + w * (3.0 * power.c3 + w * 4.0 * power.c4));
            const double d2Pdw2 =
                2.0 * power.c2 + w * (6.0 * power.c3 + w * 12.0 * power.c4);
            grad[iw] += q * dPdw * sw;
            hess_diag[iw] += q * d2Pdw2 * sw * sw;
            grad[ia] += q * 2.0 * power.c_accel * a * control_scale;
            hess_diag[ia] += q * 2.0 * power.c_accel * control_scale * control_scale;
        }
    }
}

void NlpProblem::node_dynamics(const Eigen::VectorXd& x, int node,
                               Eigen::Matrix<double, kStateDim, 1>& f) const {
    std::array<double, kStateDim> s;
    std::array<double, kControlDim> u;
    for (int i = 0; i < kStateDim; ++i) s[i] = x[var(node, i)] * state_scale[i];
    for (int i = 0; i < kControlDim; ++i)
        u[i] = x[var(node, kStateDim + i)] * control_scale;
    const auto fs = state_derivative(s, u, mode, params, derived);
    for (int i = 0; i < kStateDim; ++i) f[i] = fs[i] / state_scale[i];
}

void NlpProblem::node_dynamics_ad(
    const Eigen::VectorXd& x, int node, Eigen::Matrix<double, kStateDim, 1>& f,
    Eigen::Matrix<double, kStateDim, kNodeDim>& jac,
    const Eigen::Matrix<double, kStateDim, 1>* hess_weights,
    Eigen::Matrix<double, kNodeDim, kNodeDim>* weighted_hess) const {
    using D = Dual2<kNodeDim>;
    std::array<D, kStateDim> s;
    std::array<D, kControlDim> u;
    for (int i = 0; i < kStateDim; ++i)
        s[i] = D::variable(x[var(node, i)] * state_scale[i], i, state_scale[i]);
    for (int i = 0; i < kControlDim; ++i)
        u[i] = D::variable(x[var(node, kStateDim + i)] * control_scale,
                           kStateDim + i, control_scale);
    const auto fs = state_derivative(s, u, mode, params, derived);
    if (weighted_hess) weighted_hess->setZero();
    for (int i = 0; i < kStateDim; ++i) {
        const double inv = 1.0 / state_scale[i];
        f[i] = fs[i].v * inv;
        jac.row(i) = fs[i].g.transpose() * inv;
        if (weighted_hess)
            weighted_hess->noalias() += ((*hess_weights)[i] * inv) * fs[i].h;
    }
}

void NlpProblem::defects(const Eigen::VectorXd& x, Eigen::VectorXd& c,
                         ExecMode exec) const {
    c.resize(n_defects());
    std::vector<Eigen::Matrix<double, kStateDim, 1>> f(nodes);
    const auto eval = [&](int k) { node_dynamics(x, k, f[k]); };
    if (exec == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < nodes; ++k) eval(k);
    } else {
        for (int k = 0; k < nodes; ++k) eval(k);
    }
    const double half_h = 0.5 * h;
    for (int k = 0; k + 1 < nodes; ++k) {
        for (int i = 0; i < kStateDim; ++i) {
            c[k * kStateDim + i] = x[var(k + 1, i)] - x[var(k, i)] -
                                   half_h * (f[k][i] + f[k + 1][i]);
        }
    }
}

Eigen::VectorXd NlpProblem::clamp_to_bounds(Eigen::VectorXd x) const {
    for (int i = 0; i < n_vars(); ++i)
        x[i] = std::min(std::max(x[i], lower[i]), upper[i]);
    return x;
}

Trajectory NlpProblem::to_trajectory(const Eigen::VectorXd& x) const {
    Trajectory traj;
    traj.t.reserve(nodes);
    traj.states.reserve(nodes);
    traj.controls.reserve(nodes);
    for (int k = 0; k < nodes; ++k) {
        std::array<double, kStateDim> s;
        for (int i = 0; i < kStateDim; ++i) {
            s[i] = x[var(k, i)] * state_scale[i];
            if (i < 3) s[i] += frame_shift[i];
        }
        ControlInput u;
        for (int i = 0; i < kControlDim; ++i)
            u.alpha[i] = x[var(k, kStateDim + i)] * control_scale;
        traj.t.push_back(t0 + k * h);
        traj.states.push_back(QuadState::from_array(s));
        traj.controls.push_back(u);
    }
    return traj;
}

Eigen::VectorXd initial_guess(const BoundaryConditions& bc, const NlpProblem& nlp,
                              InitStrategy strategy) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nlp.n_vars());
    const double w_h = hover_omega(nlp.params, nlp.derived);
    for (int k = 0; k < nlp.nodes; ++k) {
        const double frac = static_cast<double>(k) / (nlp.nodes - 1);
        for (int i = 0; i < kStateDim; ++i) {
            double value;
            if (strategy == InitStrategy::HoverHold) {
                value = bc.x0[i];
            } else if (bc.xf_fixed[i]) {
                value = (1.0 - frac) * bc.x0[i] + frac * bc.xf[i];
            } else if (i >= kOmega0) {
                value = (1.0 - frac) * bc.x0[i] + frac * w_h;
            } else {
                value = bc.x0[i];
            }
            if (i < 3) value -= nlp.frame_shift[i];
            x[nlp.var(k, i)] = value / nlp.state_scale[i];
        }
    }
    return nlp.clamp_to_bounds(x);
}

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::MaxIter: return "max_iter";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

double touchdown_time(const Trajectory& traj, double z_eps) {
    // First time z drops under the threshold and never rises back above it.
    const std::size_t n = traj.t.size();
    std::size_t down = n;
    for (std::size_t k = 0; k < n; ++k) {
        if (traj.states[k].z <= z_eps) {
            if (down == n) down = k;
        } else {
            down = n;
        }
    }
    return down == n ? std::numeric_limits<double>::quiet_NaN() : traj.t[down];
}

double saturation_fraction(const Trajectory& traj, double omega_max,
                           double rel_tol) {
    if (traj.t.size() < 2) return 0.0;
    const double thresh = omega_max * (1.0 - rel_tol);
    double saturated = 0.0, total = 0.0;
    for (std::size_t k = 0; k + 1 < traj.t.size(); ++k) {
        const double dt = traj.t[k + 1] - traj.t[k];
        total += dt;
        double mean = 0.0;
        for (int m = 0; m < 4; ++m) mean += traj.states[k].omega[m];
        if (mean / 4.0 >= thresh) saturated += dt;
    }
    return saturated / total;
}

double longest_low_omega_window(const Trajectory& traj, double omega_thresh,
                                double before_t) {
    double best = 0.0, start = -1.0;
    for (std::size_t k = 0; k < traj.t.size() && traj.t[k] <= before_t; ++k) {
        double peak = 0.0;
        for (int m = 0; m < 4; ++m)
            peak = std::max(peak, traj.states[k].omega[m]);
        if (peak <= omega_thresh) {
            if (start < 0.0) start = traj.t[k];
            best = std::max(best, traj.t[k] - start);
        } else {
            start = -1.0;
        }
    }
    return best;
}

}  // namespace emflight::trajopt
