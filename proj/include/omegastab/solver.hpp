#pragma once

#include <vector>

#include <Eigen/Dense>

#include "omegastab/lmi.hpp"
#include "omegastab/numkernel.hpp"
#include "omegastab/region.hpp"

namespace omegastab {

struct SolverOptions {
  int outer_iters = 100;    // BCD sweeps
  int inner_iters = 500;    // ADMM / alternating-projection cap
  double inner_tol = 1e-8;  // primal/dual residual tolerance
  double step0 = 0.0;       // initial gradient step; 0 = 1/||A||_F
  double backtrack_factor = 0.5;
  double step_grow = 2.0;
  double mu_floor = 0.0;  // inversion floor; 0 = 1e-9 * trace(P)/n
  double admm_rho = 1.0;
  double cert_tol = 1e-6;    // delta* threshold for the stability certificate
  double bisect_tol = 0.0;   // 0 = 1e-6 * (1 + delta_hi)
  bool gradient_steps = true;
  bool eval_projected_objective = false;  // variant: restore feasibility before
                                          // measuring the backtracking objective
  std::uint64_t seed = 0;
};

struct SolveReport {
  std::vector<double> objective_history;  // ||A - X_t||_F, entry 0 = initial
  DhTriple final_triple;
  MatrixXd final_matrix;
  Eigen::VectorXcd eigenvalues;
  double final_margin = 0.0;
  double elapsed_seconds = 0.0;
};

double mu_for(const MatrixXd& p, const SolverOptions& opts);

// 0.5 * ||A - (J-R) * reginv(P, mu)||_F^2 and its gradient pieces live on
// the squared scale; reports store the plain Frobenius norm.
double objective(const MatrixXd& a, const DhTriple& t, double mu);

struct JrResult {
  MatrixXd J;
  MatrixXd R;
  bool converged = false;
  int iters = 0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  std::vector<MatrixXd> multipliers;  // PSD multiplier estimate per operator
};

// Exact convex solve in (J, R) for fixed P: minimize ||A - (J-R)P^-mu||_F^2
// subject to eval_i(J,R,P) >= 0 via consensus ADMM. The quadratic step is
// closed-form in the eigenbasis of (P^-mu)^2. The returned pair satisfies
// min_margin >= -1e-6 * scale (a feasibility-restoration pass runs if ADMM
// stopped short).
JrResult solve_jr(const MatrixXd& a, const MatrixXd& p,
                  const std::vector<ConstraintOperator>& ops, const SolverOptions& opts,
                  const DhTriple* warm = nullptr);

// Gradient of f(J,R,P) = ||A - (J-R)P^{-1}||_F^2, structure-projected:
// grad_J skew, grad_R / grad_P symmetric.
void gradient(const MatrixXd& a, const DhTriple& t, double mu, MatrixXd& grad_j,
              MatrixXd& grad_r, MatrixXd& grad_p);

struct StepState {
  double step = 0.0;  // 0 = derive from opts/A on first use
};

// One backtracking gradient step on all of (J, R, P); the accepted step is
// grown by step_grow for the next call. Region LMIs are not enforced here.
// Throws StepCollapse when the step underflows.
DhTriple gradient_step(const MatrixXd& a, const DhTriple& t,
                       const std::vector<ConstraintOperator>& ops, StepState& state,
                       const SolverOptions& opts);

// Block coordinate descent: alternate solve_jr with a gradient step, ending
// on a solve_jr so the final triple is feasible.
SolveReport bcd(const MatrixXd& a, const RegionSpec& region, const DhTriple& init,
                const SolverOptions& opts);

struct ProjectionResult {
  DhTriple triple;
  bool converged = false;
  int iters = 0;
};

// Frobenius projection of a stacked triple onto {structure, all region
// operators PSD, P >= mu I}, computed by consensus ADMM with blockwise
// PSD-cone projections.
ProjectionResult project_triple_full(const DhTriple& t0, const RegionSpec& region,
                                     const SolverOptions& opts);
DhTriple project_triple(const DhTriple& t0, const RegionSpec& region,
                        const SolverOptions& opts);

// Nearest (J, R) to (t0.J, t0.R) with eval_i(J,R,t0.P) >= 0, P kept fixed.
DhTriple restore_jr(const DhTriple& t0, const std::vector<ConstraintOperator>& ops,
                    const SolverOptions& opts);

}  // namespace omegastab
