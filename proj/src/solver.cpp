#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "emflight/trajopt.hpp"

namespace emflight::trajopt {

namespace {

using Mat1620 = Eigen::Matrix<double, kStateDim, kNodeDim>;
using Mat2020 = Eigen::Matrix<double, kNodeDim, kNodeDim>;
using Vec16 = Eigen::Matrix<double, kStateDim, 1>;

// Shared per-iteration storage. The Hessian of the augmented Lagrangian is
// block tridiagonal (nodes couple only to their neighbours), assembled from
// per-node dense blocks into one sparse matrix with a fixed pattern.
struct Workspace {
    explicit Workspace(const NlpProblem& nlp)
        : nlp(nlp),
          n(nlp.n_vars()),
          m(nlp.n_defects()),
          fval(nlp.nodes),
          jac(nlp.nodes),
          whess(nlp.nodes),
          diag(nlp.nodes),
          off(std::max(nlp.nodes - 1, 0)) {
        build_pattern();
    }

    const NlpProblem& nlp;
    int n, m;
    std::vector<Vec16> fval;
    std::vector<Mat1620> jac;
    std::vector<Mat2020> whess;
    std::vector<Mat2020> diag;
    std::vector<Mat2020> off;  // block (node k, node k+1)

    Eigen::VectorXd obj_grad, obj_hdiag;
    Eigen::SparseMatrix<double> H;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    bool analyzed = false;

    void build_pattern() {
        const int nodes = nlp.nodes;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(nodes) * 400 * 3);
        for (int k = 0; k < nodes; ++k) {
            for (int a = 0; a < kNodeDim; ++a)
                for (int b = 0; b < kNodeDim; ++b) {
                    trip.emplace_back(k * kNodeDim + a, k * kNodeDim + b, 1.0);
                    if (k + 1 < nodes) {
                        trip.emplace_back(k * kNodeDim + a, (k + 1) * kNodeDim + b, 1.0);
                        trip.emplace_back((k + 1) * kNodeDim + a, k * kNodeDim + b, 1.0);
                    }
                }
        }
        H.resize(n, n);
        H.setFromTriplets(trip.begin(), trip.end());
        H.makeCompressed();
    }

    // Write the current blocks into H. Fixed variables get an identity
    // row/column so the pattern (and symbolic factorization) never changes;
    // extra_diag carries the barrier curvature.
    void scatter(const std::vector<char>& mask, double delta,
                 const Eigen::VectorXd& extra_diag) {
        const int nodes = nlp.nodes;
        double* vals = H.valuePtr();
        const auto* outer = H.outerIndexPtr();
        for (int col = 0; col < n; ++col) {
            const int kc = col / kNodeDim;
            const int lc = col % kNodeDim;
            int ptr = outer[col];
            const bool cmask = mask[col] != 0;
            if (kc > 0) {
                const Mat2020& O = off[kc - 1];
                const int base = (kc - 1) * kNodeDim;
                for (int r = 0; r < kNodeDim; ++r, ++ptr)
                    vals[ptr] = (cmask || mask[base + r]) ? 0.0 : O(r, lc);
            }
            {
                const Mat2020& D = diag[kc];
                const int base = kc * kNodeDim;
                for (int r = 0; r < kNodeDim; ++r, ++ptr) {
                    const int row = base + r;
                    if (row == col)
                        vals[ptr] =
                            cmask ? 1.0 : D(r, lc) + delta + extra_diag[col];
                    else
                        vals[ptr] = (cmask || mask[row]) ? 0.0 : D(r, lc);
                }
            }
            if (kc + 1 < nodes) {
                const Mat2020& O = off[kc];
                const int base = (kc + 1) * kNodeDim;
                for (int r = 0; r < kNodeDim; ++r, ++ptr)
                    vals[ptr] = (cmask || mask[base + r]) ? 0.0 : O(lc, r);
            }
        }
    }
};

double project(double v, double lo, double hi) {
    return std::min(std::max(v, lo), hi);
}

Eigen::VectorXd project_box(const NlpProblem& nlp, Eigen::VectorXd x) {
    for (int i = 0; i < x.size(); ++i)
        x[i] = project(x[i], nlp.lower[i], nlp.upper[i]);
    return x;
}

// Norm of the projected gradient step, the box-constrained stationarity
// measure.
double projected_gradient_norm(const NlpProblem& nlp, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& g) {
    double norm = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        const double moved = project(x[i] - g[i], nlp.lower[i], nlp.upper[i]) - x[i];
        norm = std::max(norm, std::abs(moved));
    }
    return norm;
}

struct AlEval {
    double value;
    double feas;
};

AlEval augmented_value(const NlpProblem& nlp, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& lambda, double rho,
                       Eigen::VectorXd& c, ExecMode exec) {
    nlp.defects(x, c, exec);
    const double obj = nlp.objective_scaled(x);
    return {obj + lambda.dot(c) + 0.5 * rho * c.squaredNorm(),
            c.size() > 0 ? c.lpNorm<Eigen::Infinity>() : 0.0};
}

struct InnerStats {
    int iterations = 0;
    double pg_norm = std::numeric_limits<double>::infinity();
    double feas = std::numeric_limits<double>::infinity();
    bool stalled = false;
};

// Minimize the augmented Lagrangian over the box. Bounds are handled with a
// log barrier so the Newton iteration stays smooth (no active-set flipping);
// the barrier weight mu_b shrinks along the outer loop. Fixed variables
// (lower == upper) keep identity rows in the system.
InnerStats inner_solve(Workspace& ws, Eigen::VectorXd& x,
                       const Eigen::VectorXd& lambda, double rho, double mu_b,
                       double tol, int budget, const SolveOptions& opts,
                       double* delta_seed) {
    const NlpProblem& nlp = ws.nlp;
    const int nodes = nlp.nodes;
    const double half_h = 0.5 * nlp.h;
    constexpr double kBoundaryFrac = 0.995;

    InnerStats stats;
    Eigen::VectorXd c(ws.m), ctrial(ws.m);
    Eigen::VectorXd g(ws.n), rhs(ws.n), d(ws.n), bdiag(ws.n);
    std::vector<char> fixed(ws.n, 0);
    for (int i = 0; i < ws.n; ++i) fixed[i] = nlp.lower[i] == nlp.upper[i];

    // Pull free variables strictly inside their bounds.
    for (int i = 0; i < ws.n; ++i) {
        if (fixed[i]) continue;
        const double push = 1e-4;
        if (std::isfinite(nlp.lower[i])) x[i] = std::max(x[i], nlp.lower[i] + push);
        if (std::isfinite(nlp.upper[i])) x[i] = std::min(x[i], nlp.upper[i] - push);
    }

    const auto barrier_value = [&](const Eigen::VectorXd& xq) {
        double b = 0.0;
        for (int i = 0; i < ws.n; ++i) {
            if (fixed[i]) continue;
            if (std::isfinite(nlp.lower[i])) b -= std::log(xq[i] - nlp.lower[i]);
            if (std::isfinite(nlp.upper[i])) b -= std::log(nlp.upper[i] - xq[i]);
        }
        return mu_b * b;
    };

    AlEval cur = augmented_value(nlp, x, lambda, rho, c, opts.exec);
    double cur_merit = cur.value + barrier_value(x);

    for (int it = 0; it < budget; ++it) {
        nlp.objective_derivatives(x, ws.obj_grad, ws.obj_hdiag);

        const auto mu = [&](int interval) -> Vec16 {
            return lambda.segment<kStateDim>(interval * kStateDim) +
                   rho * c.segment<kStateDim>(interval * kStateDim);
        };

        // Hessian weights use the multiplier estimate only (Gauss-Newton
        // treatment of the penalty term): the rho*c-weighted curvature is
        // indefinite far from the feasible manifold and vanishes on it, so
        // dropping it buys global behaviour without losing the local rate.
#pragma omp parallel for schedule(static)
        for (int k = 0; k < nodes; ++k) {
            Vec16 w = Vec16::Zero();
            if (k > 0) w += lambda.segment<kStateDim>((k - 1) * kStateDim);
            if (k + 1 < nodes) w += lambda.segment<kStateDim>(k * kStateDim);
            w *= -half_h;
            nlp.node_dynamics_ad(x, k, ws.fval[k], ws.jac[k], &w, &ws.whess[k]);
        }

        // Gradient of the AL and the Gauss-Newton penalty blocks.
        g = ws.obj_grad;
        for (int k = 0; k < nodes; ++k) {
            ws.diag[k] = ws.whess[k];
            ws.diag[k].diagonal() += ws.obj_hdiag.segment<kNodeDim>(k * kNodeDim);
        }
        for (int k = 0; k + 1 < nodes; ++k) {
            Mat1620 A = -half_h * ws.jac[k];
            A.block<kStateDim, kStateDim>(0, 0) -=
                Eigen::Matrix<double, kStateDim, kStateDim>::Identity();
            Mat1620 B = -half_h * ws.jac[k + 1];
            B.block<kStateDim, kStateDim>(0, 0) +=
                Eigen::Matrix<double, kStateDim, kStateDim>::Identity();

            const Vec16 m_k = mu(k);
            g.segment<kNodeDim>(k * kNodeDim).noalias() += A.transpose() * m_k;
            g.segment<kNodeDim>((k + 1) * kNodeDim).noalias() += B.transpose() * m_k;

            ws.diag[k].noalias() += rho * (A.transpose() * A);
            ws.diag[k + 1].noalias() += rho * (B.transpose() * B);
            ws.off[k].noalias() = rho * (A.transpose() * B);
        }

        // True box stationarity (no barrier) for the outer loop.
        stats.pg_norm = projected_gradient_norm(nlp, x, g);
        stats.feas = cur.feas;

        // Barrier gradient and diagonal curvature.
        bdiag.setZero();
        double barrier_grad_norm = 0.0;
        for (int i = 0; i < ws.n; ++i) {
            if (fixed[i]) continue;
            double gb = 0.0;
            if (std::isfinite(nlp.lower[i])) {
                const double s = x[i] - nlp.lower[i];
                gb -= mu_b / s;
                bdiag[i] += mu_b / (s * s);
            }
            if (std::isfinite(nlp.upper[i])) {
                const double s = nlp.upper[i] - x[i];
                gb += mu_b / s;
                bdiag[i] += mu_b / (s * s);
            }
            g[i] += gb;
            barrier_grad_norm = std::max(barrier_grad_norm, std::abs(g[i]));
        }

        if (stats.pg_norm <= tol && barrier_grad_norm <= std::max(tol, 10.0 * mu_b))
            break;
        ++stats.iterations;

        // Newton direction with growing diagonal shift; derivative blocks
        // are reused across attempts. A failed line search means the local
        // model was too optimistic, so the shift grows and the direction is
        // recomputed instead of giving up on the iterate.
        const auto try_direction = [&](const Eigen::VectorXd& dir) -> double {
            // Fraction-to-boundary cap keeps the iterate strictly interior.
            double alpha_max = 1.0;
            for (int i = 0; i < ws.n; ++i) {
                if (fixed[i] || dir[i] == 0.0) continue;
                if (dir[i] < 0.0 && std::isfinite(nlp.lower[i]))
                    alpha_max = std::min(
                        alpha_max, -kBoundaryFrac * (x[i] - nlp.lower[i]) / dir[i]);
                else if (dir[i] > 0.0 && std::isfinite(nlp.upper[i]))
                    alpha_max = std::min(
                        alpha_max, kBoundaryFrac * (nlp.upper[i] - x[i]) / dir[i]);
            }
            const double slope = g.dot(dir);
            double alpha = alpha_max;
            for (int ls = 0; ls < 30; ++ls) {
                Eigen::VectorXd xt = x + alpha * dir;
                const AlEval trial =
                    augmented_value(nlp, xt, lambda, rho, ctrial, opts.exec);
                const double merit = trial.value + barrier_value(xt);
                if (merit <= cur_merit + 1e-4 * alpha * slope) {
                    x.swap(xt);
                    c.swap(ctrial);
                    cur = trial;
                    cur_merit = merit;
                    return alpha;
                }
                alpha *= 0.5;
            }
            return 0.0;
        };

        double delta = *delta_seed;
        bool moved = false;
        double alpha_used = 0.0;
        for (int attempt = 0; attempt < 25 && !moved; ++attempt) {
            ws.scatter(fixed, delta, bdiag);
            if (!ws.analyzed) {
                ws.llt.analyzePattern(ws.H);
                ws.analyzed = true;
            }
            ws.llt.factorize(ws.H);
            if (ws.llt.info() == Eigen::Success) {
                rhs = -g;
                for (int i = 0; i < ws.n; ++i)
                    if (fixed[i]) rhs[i] = 0.0;
                d = ws.llt.solve(rhs);
                if (d.allFinite() && g.dot(d) < 0.0) {
                    alpha_used = try_direction(d);
                    if (alpha_used > 0.0) {
                        moved = true;
                        // Relax the shift once steps go through cleanly.
                        *delta_seed = alpha_used > 0.5 ? delta * 0.2 : delta;
                        if (*delta_seed < 1e-10) *delta_seed = 0.0;
                        break;
                    }
                }
            }
            delta = delta == 0.0 ? 1e-8 : delta * 10.0;
            if (delta > 1e12) break;
        }
        if (!moved) {
            // Scaled steepest descent as a last resort.
            d = -g / std::max(1.0, g.lpNorm<Eigen::Infinity>());
            for (int i = 0; i < ws.n; ++i)
                if (fixed[i]) d[i] = 0.0;
            alpha_used = try_direction(d);
            moved = alpha_used > 0.0;
        }
        if (opts.verbosity >= 2)
            std::fprintf(stderr,
                         "    it %3d  AL %.8e  pg %.2e  feas %.2e  delta %.1e  "
                         "alpha %.1e%s\n",
                         it, cur.value, stats.pg_norm, cur.feas, *delta_seed,
                         alpha_used, moved ? "" : "  STALLED");
        if (!moved) {
            stats.stalled = true;
            break;
        }
    }
    return stats;
}

}  // namespace

namespace {

// Single-stage augmented-Lagrangian loop; `solve` below may wrap it in a
// coarse-to-fine continuation.
OptResult solve_single(const NlpProblem& nlp, const Eigen::VectorXd& x_init,
                       const SolveOptions& opts) {
    Workspace ws(nlp);
    Eigen::VectorXd x = project_box(nlp, x_init);
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(ws.m);
    Eigen::VectorXd c(ws.m);

    double rho = opts.rho0;
    double inner_tol = std::max(0.1 * opts.tol, 1.0 / rho);
    double feas_gate = std::max(opts.tol, 0.5 * std::pow(rho, -0.1));
    double delta_seed = 0.0;
    // Barrier weight for the box bounds; the projected-gradient measure can
    // only reach sqrt(mu_b), so the floor sits near tol^2.
    const double mu_min = std::min(1e-8, opts.tol * opts.tol);
    double mu_b = 1e-2;

    OptResult res;
    res.status = SolveStatus::MaxIter;

    int total_iters = 0;
    double feas_at_rho_max = std::numeric_limits<double>::infinity();
    int stalled_at_rho_max = 0;

    for (int outer = 0; outer < 80 && total_iters < opts.max_iter; ++outer) {
        const int budget = std::min(300, opts.max_iter - total_iters);
        const InnerStats inner = inner_solve(ws, x, lambda, rho, mu_b, inner_tol,
                                             budget, opts, &delta_seed);
        total_iters += inner.iterations;
        mu_b = std::max(mu_min, 0.2 * mu_b);

        nlp.defects(x, c, opts.exec);
        const double feas = ws.m > 0 ? c.lpNorm<Eigen::Infinity>() : 0.0;
        if (opts.verbosity >= 1)
            std::fprintf(stderr,
                         "  outer %2d  rho %.1e  feas %.3e  pg %.3e  iters %d\n",
                         outer, rho, feas, inner.pg_norm, total_iters);

        if (feas <= std::max(feas_gate, opts.tol)) {
            lambda += rho * c;
            // At inner convergence the AL gradient equals the Lagrangian
            // gradient with the updated multipliers, so pg_norm doubles as
            // the KKT stationarity measure.
            nlp.objective_derivatives(x, ws.obj_grad, ws.obj_hdiag);
            const double kkt_scale = std::max(1.0, ws.obj_grad.lpNorm<Eigen::Infinity>());
            if (feas <= opts.tol && inner.pg_norm <= opts.tol * kkt_scale) {
                res.status = SolveStatus::Optimal;
                res.feasibility = feas;
                res.kkt_residual = inner.pg_norm;
                break;
            }
            feas_gate = std::max(0.5 * opts.tol, feas_gate / std::pow(rho, 0.9));
            inner_tol = std::max(0.05 * opts.tol, inner_tol / rho);
        } else {
            if (rho >= 1e6) {
                // Penalty already severe: declare local infeasibility once
                // the violation stops improving at converged (or hopelessly
                // stalled) inner solves.
                const bool settled = inner.pg_norm <= 10.0 * inner_tol || inner.stalled;
                if (settled && feas > 0.95 * feas_at_rho_max)
                    ++stalled_at_rho_max;
                else if (settled && feas < 0.5 * feas_at_rho_max)
                    stalled_at_rho_max = 0;
                feas_at_rho_max = std::min(feas_at_rho_max, feas);
                if (stalled_at_rho_max >= 2 && feas > 50.0 * opts.tol) {
                    res.status = SolveStatus::Infeasible;
                    res.feasibility = feas;
                    res.kkt_residual = inner.pg_norm;
                    break;
                }
            }
            rho = std::min(rho * 10.0, opts.rho_max);
            feas_gate = std::max(opts.tol, 0.5 * std::pow(rho, -0.1));
            inner_tol = std::max(0.1 * opts.tol, 1.0 / rho);
        }
        res.feasibility = feas;
        res.kkt_residual = inner.pg_norm;
    }

    res.iterations = total_iters;
    res.trajectory = nlp.to_trajectory(x);
    res.energy_j = nlp.objective_physical(x);
    return res;
}

// Linear-in-time prolongation of a coarse solution onto a finer mesh.
Eigen::VectorXd prolongate(const NlpProblem& coarse, const Eigen::VectorXd& xc,
                           const NlpProblem& fine) {
    Eigen::VectorXd xf(fine.n_vars());
    for (int k = 0; k < fine.nodes; ++k) {
        const double t = fine.t0 + k * fine.h;
        double pos = (t - coarse.t0) / coarse.h;
        pos = std::min(std::max(pos, 0.0), static_cast<double>(coarse.nodes - 1));
        const int lo = std::min(static_cast<int>(pos), coarse.nodes - 2);
        const double w = pos - lo;
        for (int dim = 0; dim < kNodeDim; ++dim) {
            const double v = (1.0 - w) * xc[coarse.var(lo, dim)] +
                             w * xc[coarse.var(lo + 1, dim)];
            xf[fine.var(k, dim)] = v;  // scales are identical across meshes
        }
    }
    return fine.clamp_to_bounds(xf);
}

}  // namespace

OptResult AugLagBackend::solve(const NlpProblem& nlp, const Eigen::VectorXd& x_init,
                               const SolveOptions& opts) {
    // Coarse-to-fine continuation: resolve the trajectory shape on a cheap
    // mesh first, then polish on the requested one. The coarse stage starts
    // from the configured initial-guess strategy, so results remain a pure
    // function of (problem, options).
    if (opts.continuation && nlp.nodes >= 160) {
        const int coarse_nodes = std::clamp(nlp.nodes / 5, 60, 120);
        GravityMode physical_mode = nlp.mode;
        for (int i = 0; i < 3; ++i)
            physical_mode.target[i] = nlp.mode.target[i] + nlp.frame_shift[i];
        const NlpProblem coarse =
            transcribe(nlp.bc, physical_mode, nlp.params, coarse_nodes);

        SolveOptions coarse_opts = opts;
        coarse_opts.tol = std::max(opts.tol, 2e-4);
        coarse_opts.max_iter = std::min(opts.max_iter, 3000);
        coarse_opts.continuation = false;
        const OptResult coarse_result = solve_single(
            coarse, initial_guess(coarse.bc, coarse, opts.init), coarse_opts);

        if (coarse_result.status == SolveStatus::Infeasible) {
            OptResult res = coarse_result;
            res.trajectory = nlp.to_trajectory(x_init);
            res.energy_j = nlp.objective_physical(x_init);
            return res;
        }

        Eigen::VectorXd xc(coarse.n_vars());
        for (int k = 0; k < coarse.nodes; ++k) {
            const auto s = coarse_result.trajectory.states[k].to_array();
            for (int i = 0; i < kStateDim; ++i) {
                double v = s[i];
                if (i < 3) v -= coarse.frame_shift[i];
                xc[coarse.var(k, i)] = v / coarse.state_scale[i];
            }
            for (int i = 0; i < kControlDim; ++i)
                xc[coarse.var(k, kStateDim + i)] =
                    coarse_result.trajectory.controls[k].alpha[i] /
                    coarse.control_scale;
        }
        SolveOptions fine_opts = opts;
        fine_opts.max_iter = std::max(500, opts.max_iter - coarse_result.iterations);
        OptResult res = solve_single(nlp, prolongate(coarse, xc, nlp), fine_opts);
        res.iterations += coarse_result.iterations;
        return res;
    }
    return solve_single(nlp, x_init, opts);
}

OptResult solve(const NlpProblem& nlp, const SolveOptions& opts) {
    AugLagBackend backend;
    return backend.solve(nlp, initial_guess(nlp.bc, nlp, opts.init), opts);
}

std::vector<SweepRow> tf_sweep(const BoundaryConditions& base, const DroneParams& p,
                               const std::vector<double>& tf_values, int nodes,
                               const SolveOptions& opts) {
    struct Job {
        double tf;
        GravityMode::Kind kind;
    };
    std::vector<Job> jobs;
    for (const double tf : tf_values)
        for (const auto kind :
             {GravityMode::Kind::Incentivized, GravityMode::Kind::Standard})
            jobs.push_back({tf, kind});

    std::vector<SweepRow> rows(jobs.size());
    const int njobs = static_cast<int>(jobs.size());

    const auto run = [&](int j) {
        BoundaryConditions bc = base;
        bc.t_f = jobs[j].tf;
        GravityMode mode = GravityMode::standard();
        if (jobs[j].kind == GravityMode::Kind::Incentivized)
            mode = GravityMode::incentivized({bc.xf[0], bc.xf[1], bc.xf[2]},
                                             p.k_decay);
        SweepRow row{jobs[j].tf, jobs[j].kind,
                     std::numeric_limits<double>::quiet_NaN(),
                     SolveStatus::Infeasible};
        try {
            const NlpProblem nlp = transcribe(bc, mode, p, nodes);
            const OptResult r = solve(nlp, opts);
            row.status = r.status;
            if (r.status == SolveStatus::Optimal) row.energy_j = r.energy_j;
        } catch (const std::exception&) {
            row.status = SolveStatus::Infeasible;
        }
        rows[j] = row;
    };

    if (opts.exec == ExecMode::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int j = 0; j < njobs; ++j) run(j);
    } else {
        for (int j = 0; j < njobs; ++j) run(j);
    }
    return rows;
}

}  // namespace emflight::trajopt
