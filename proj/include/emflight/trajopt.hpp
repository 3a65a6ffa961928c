#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "emflight/dynamics.hpp"
#include "emflight/motor_energy.hpp"
#include "emflight/parallel.hpp"

namespace emflight::trajopt {

inline constexpr int kNodeDim = kStateDim + kControlDim;  // 20

// Fixed full initial state, per-component fixed/free final state.
struct BoundaryConditions {
    std::array<double, kStateDim> x0{};
    std::array<double, kStateDim> xf{};
    std::array<bool, kStateDim> xf_fixed{};
    double t0 = 0.0;
    double t_f = 22.0;

    // Reference ascent: ground at rest with motors idling up to a moving
    // cruise-entry state 200 m out and 200 m up.
    static BoundaryConditions takeoff();
    // Reference descent: cruise-entry mirror down to rest on the ground.
    static BoundaryConditions landing();
};

// Trapezoidal transcription of the minimum-energy problem on a uniform
// grid. Decision vector is node-major, [state(16), control(4)] per node,
// with every entry divided by its scale; positions are additionally shifted
// by frame_shift so the landing target sits at the origin. Defect residuals
// are state-scaled, making the feasibility tolerance dimensionless.
struct NlpProblem {
    int nodes = 500;
    double t0 = 0.0;
    double tf = 22.0;
    double h = 0.0;  // node spacing [s]

    GravityMode mode;  // target already expressed in the internal frame
    std::array<double, 3> frame_shift{0, 0, 0};
    DroneParams params;
    DerivedParams derived;
    MotorPowerCoefficients power{};
    BoundaryConditions bc;  // original, physical frame

    std::array<double, kStateDim> state_scale{};
    double control_scale = 1.0;
    double obj_scale = 1.0;

    Eigen::VectorXd lower, upper;  // scaled bounds, size n_vars()

    int n_vars() const { return nodes * kNodeDim; }
    int n_defects() const { return (nodes - 1) * kStateDim; }
    int var(int node, int dim) const { return node * kNodeDim + dim; }
    double quad_weight(int k) const {
        return (k == 0 || k == nodes - 1) ? 0.5 * h : h;
    }
    double scale_of(int dim) const {
        return dim < kStateDim ? state_scale[dim] : control_scale;
    }

    // Motor energy objective [J] of the physical trajectory encoded in x.
    double objective_physical(const Eigen::VectorXd& x) const;
    double objective_scaled(const Eigen::VectorXd& x) const;
    // Gradient and (diagonal) Hessian of the scaled objective.
    void objective_derivatives(const Eigen::VectorXd& x, Eigen::VectorXd& grad,
                               Eigen::VectorXd& hess_diag) const;

    // Scaled trapezoidal defect residuals, size n_defects().
    void defects(const Eigen::VectorXd& x, Eigen::VectorXd& c,
                 ExecMode exec = ExecMode::Parallel) const;

    // Scaled dynamics at one node: value, Jacobian, and optionally the
    // Hessian of (weights . f) with respect to the node's 20 variables.
    void node_dynamics(const Eigen::VectorXd& x, int node,
                       Eigen::Matrix<double, kStateDim, 1>& f) const;
    void node_dynamics_ad(
        const Eigen::VectorXd& x, int node,
        Eigen::Matrix<double, kStateDim, 1>& f,
        Eigen::Matrix<double, kStateDim, kNodeDim>& jac,
        const Eigen::Matrix<double, kStateDim, 1>* hess_weights,
        Eigen::Matrix<double, kNodeDim, kNodeDim>* weighted_hess) const;

    Eigen::VectorXd clamp_to_bounds(Eigen::VectorXd x) const;
    // Decode into a physical-frame trajectory (states + controls at nodes).
    Trajectory to_trajectory(const Eigen::VectorXd& x) const;
};

NlpProblem transcribe(const BoundaryConditions& bc, const GravityMode& mode,
                      const DroneParams& p, int nodes = 500);

enum class InitStrategy { LinearInterp, HoverHold };

// LinearInterp: straight lines between fixed boundary components, a ramp
// toward hover speed for free motor dimensions, zero controls. HoverHold:
// x0 replicated. Both respect all variable bounds.
Eigen::VectorXd initial_guess(const BoundaryConditions& bc, const NlpProblem& nlp,
                              InitStrategy strategy);

enum class SolveStatus { Optimal, MaxIter, Infeasible };
const char* status_name(SolveStatus s);

struct SolveOptions {
    double tol = 1e-4;        // feasibility and stationarity tolerance
    int max_iter = 5000;      // total inner-iteration budget
    InitStrategy init = InitStrategy::LinearInterp;
    ExecMode exec = ExecMode::Parallel;
    int verbosity = 0;        // 0 quiet, 1 outer loop, 2 inner iterations
    double rho0 = 10.0;       // initial penalty
    double rho_max = 1e8;
    unsigned seed = 0;        // recorded only; every code path is deterministic
};

struct OptResult {
    Trajectory trajectory;
    double energy_j = 0.0;
    SolveStatus status = SolveStatus::MaxIter;
    int iterations = 0;
    double kkt_residual = 0.0;   // projected Lagrangian-gradient norm
    double feasibility = 0.0;    // max scaled defect violation
};

// Solver hook. The in-tree backend is an augmented-Lagrangian method with a
// projected-Newton inner loop over the bound constraints; any local NLP
// solver meeting the residual tolerances can be slotted in behind this
// interface instead.
class NlpBackend {
  public:
    virtual ~NlpBackend() = default;
    virtual OptResult solve(const NlpProblem& nlp, const Eigen::VectorXd& x_init,
                            const SolveOptions& opts) = 0;
};

class AugLagBackend final : public NlpBackend {
  public:
    OptResult solve(const NlpProblem& nlp, const Eigen::VectorXd& x_init,
                    const SolveOptions& opts) override;
};

OptResult solve(const NlpProblem& nlp, const SolveOptions& opts = {});

struct SweepRow {
    double t_f;
    GravityMode::Kind mode;
    double energy_j;  // NaN unless status == Optimal
    SolveStatus status;
};

// Landing-style horizon sweep under both gravity models. Independent solves
// are distributed across OpenMP workers; rows come back ordered by t_f then
// mode regardless of completion order. Per-point failures are recorded and
// the sweep continues.
std::vector<SweepRow> tf_sweep(const BoundaryConditions& base, const DroneParams& p,
                               const std::vector<double>& tf_values, int nodes,
                               const SolveOptions& opts);

// Trajectory metrics used by reports and acceptance checks.
double touchdown_time(const Trajectory& traj, double z_eps = 0.05);
double saturation_fraction(const Trajectory& traj, double omega_max,
                           double rel_tol = 0.005);
double longest_low_omega_window(const Trajectory& traj, double omega_thresh,
                                double before_t);

}  // namespace emflight::trajopt
