#include "omegastab/solver.hpp"

#include <chrono>
#include <cmath>

namespace omegastab {

double mu_for(const MatrixXd& p, const SolverOptions& opts) {
  return opts.mu_floor > 0 ? opts.mu_floor : default_mu(p);
}

double objective(const MatrixXd& a, const DhTriple& t, double mu) {
  return (a - dh_assemble(t, mu)).squaredNorm();
}

namespace {

constexpr double kFeasSlack = 1e-6;  // post-solve margin requirement

struct GramSums {
  double jj = 0, rr = 0, rp = 0, pp = 0;
};

GramSums gram_sums(const std::vector<ConstraintOperator>& ops) {
  GramSums g;
  for (const auto& op : ops) {
    g.jj += op.gram_jj();
    g.rr += op.gram_rr();
    g.rp += op.gram_rp();
    g.pp += op.gram_pp();
  }
  return g;
}

// Solve 2 M G + gj skew(M) + gr sym(M) = C with G = Ug diag(g) Ug^T psd.
// Decouples into 2x2 systems per entry pair in the eigenbasis of G.
MatrixXd solve_m_equation(const MatrixXd& c, const MatrixXd& ug, const VectorXd& g,
                          double gamma_j, double gamma_r) {
  const int n = static_cast<int>(g.size());
  const MatrixXd ct = ug.transpose() * c * ug;
  const double a = 0.5 * (gamma_j + gamma_r);
  const double b = 0.5 * (gamma_r - gamma_j);
  MatrixXd mt(n, n);
  for (int i = 0; i < n; ++i) {
    const double d = 2.0 * g(i) + gamma_r;
    if (!(d > 0) || !std::isfinite(d))
      throw NumericalBreakdown("jr subproblem: singular normal system");
    mt(i, i) = ct(i, i) / d;
    for (int j = i + 1; j < n; ++j) {
      const double a11 = 2.0 * g(j) + a;
      const double a22 = 2.0 * g(i) + a;
      const double det = a11 * a22 - b * b;
      if (!(det > 0) || !std::isfinite(det))
        throw NumericalBreakdown("jr subproblem: singular normal system");
      mt(i, j) = (a22 * ct(i, j) - b * ct(j, i)) / det;
      mt(j, i) = (a11 * ct(j, i) - b * ct(i, j)) / det;
    }
  }
  return ug * mt * ug.transpose();
}

struct Residuals {
  double primal = 0, dual = 0, eps_pri = 1, eps_dual = 1;
  bool done(double tol) const {
    return primal <= tol * eps_pri && dual <= tol * eps_dual;
  }
};

}  // namespace

JrResult solve_jr(const MatrixXd& a, const MatrixXd& p,
                  const std::vector<ConstraintOperator>& ops, const SolverOptions& opts,
                  const DhTriple* warm) {
  const int n = static_cast<int>(a.rows());
  if (ops.empty()) throw InvalidParameter("solve_jr: no constraint operators");
  const double mu = mu_for(p, opts);
  const MatrixXd pinv = regularized_inverse(p, mu);
  const MatrixXd gmat = sym(pinv * pinv);
  if (!gmat.allFinite()) throw NumericalBreakdown("solve_jr: P^-2 not finite");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(gmat);
  const MatrixXd ug = es.eigenvectors();
  const VectorXd g = es.eigenvalues();
  const MatrixXd apinv = a * pinv;
  const GramSums gs = gram_sums(ops);

  DhTriple t{MatrixXd::Zero(n, n), MatrixXd::Zero(n, n), p};
  if (warm) {
    t.J = skew(warm->J);
    t.R = sym(warm->R);
  }

  const size_t m = ops.size();
  std::vector<MatrixXd> kblk(m), z(m), u(m), ev(m);
  for (size_t i = 0; i < m; ++i) {
    kblk[i] = ops[i].eval({MatrixXd::Zero(n, n), MatrixXd::Zero(n, n), p});
    ev[i] = ops[i].eval(t);
    z[i] = psd_project(ev[i]);
    u[i] = MatrixXd::Zero(z[i].rows(), z[i].cols());
  }

  double rho = opts.admm_rho * std::max(1.0, 2.0 * g.mean());
  JrResult res;
  Residuals rr;
  for (int it = 0; it < opts.inner_iters; ++it) {
    // (a) quadratic step in (J, R)
    MatrixXd adj_j = MatrixXd::Zero(n, n), adj_r = MatrixXd::Zero(n, n),
             adj_p = MatrixXd::Zero(n, n);
    for (size_t i = 0; i < m; ++i)
      ops[i].add_adjoint(kblk[i] - z[i] + u[i], adj_j, adj_r, adj_p);
    const MatrixXd c = 2.0 * sym(apinv) + rho * sym(adj_r) + 2.0 * skew(apinv) -
                       rho * skew(adj_j);
    const MatrixXd mm = solve_m_equation(c, ug, g, rho * gs.jj, rho * gs.rr);
    t.J = skew(mm);
    t.R = -sym(mm);

    // (b) cone projections, (c) dual ascent
    double prim2 = 0, nrm_ev = 0, nrm_z = 0;
    MatrixXd dz_j = MatrixXd::Zero(n, n), dz_r = MatrixXd::Zero(n, n),
             dz_p = MatrixXd::Zero(n, n);
    MatrixXd uj = MatrixXd::Zero(n, n), ur = MatrixXd::Zero(n, n),
             up = MatrixXd::Zero(n, n);
    for (size_t i = 0; i < m; ++i) {
      ev[i] = ops[i].eval(t);
      const MatrixXd znew = psd_project(ev[i] + u[i]);
      ops[i].add_adjoint(znew - z[i], dz_j, dz_r, dz_p);
      u[i] += ev[i] - znew;
      z[i] = znew;
      prim2 += (ev[i] - z[i]).squaredNorm();
      nrm_ev += ev[i].squaredNorm();
      nrm_z += z[i].squaredNorm();
      ops[i].add_adjoint(u[i], uj, ur, up);
    }
    rr.primal = std::sqrt(prim2);
    rr.dual = rho * std::sqrt(dz_j.squaredNorm() + dz_r.squaredNorm());
    rr.eps_pri = std::max(1.0, std::sqrt(std::max(nrm_ev, nrm_z)));
    rr.eps_dual = std::max(1.0, rho * std::sqrt(uj.squaredNorm() + ur.squaredNorm()));
    res.iters = it + 1;
    if (rr.done(opts.inner_tol)) {
      res.converged = true;
      break;
    }
    if ((it + 1) % 25 == 0) {
      if (rr.primal > 10.0 * rr.dual * rr.eps_pri / rr.eps_dual) {
        rho *= 2.0;
        for (auto& ui : u) ui *= 0.5;
      } else if (rr.dual * rr.eps_pri / rr.eps_dual > 10.0 * rr.primal) {
        rho *= 0.5;
        for (auto& ui : u) ui *= 2.0;
      }
    }
  }
  res.primal_res = rr.primal;
  res.dual_res = rr.dual;
  res.multipliers.reserve(m);
  for (size_t i = 0; i < m; ++i) res.multipliers.push_back(-rho * u[i]);

  // Guaranteed feasible output.
  const double scale = 1.0 + std::max(t.R.norm(), p.norm());
  if (min_margin(ops, t) < -kFeasSlack * scale) {
    const DhTriple fixed = restore_jr(t, ops, opts);
    t.J = fixed.J;
    t.R = fixed.R;
  }
  res.J = t.J;
  res.R = t.R;
  return res;
}

void gradient(const MatrixXd& a, const DhTriple& t, double mu, MatrixXd& grad_j,
              MatrixXd& grad_r, MatrixXd& grad_p) {
  const MatrixXd pinv = regularized_inverse(t.P, mu);
  const MatrixXd e = (t.J - t.R) * pinv - a;
  const MatrixXd raw = 2.0 * e * pinv;  // = grad_J = -grad_R before projection
  grad_j = skew(raw);
  grad_r = sym(-raw);
  grad_p = sym(-2.0 * pinv * (t.J - t.R).transpose() * e * pinv);
}

DhTriple gradient_step(const MatrixXd& a, const DhTriple& t,
                       const std::vector<ConstraintOperator>& ops, StepState& state,
                       const SolverOptions& opts) {
  const double mu = mu_for(t.P, opts);
  const double step0 =
      opts.step0 > 0 ? opts.step0 : 1.0 / std::max(a.norm(), 1e-300);
  if (state.step <= 0) state.step = step0;

  MatrixXd gj, gr, gp;
  gradient(a, t, mu, gj, gr, gp);
  const double f0 = objective(a, t, mu);

  double s = state.step;
  while (true) {
    DhTriple cand{skew(t.J - s * gj), sym(t.R - s * gr), psd_floor(t.P - s * gp, mu)};
    if (opts.eval_projected_objective) cand = restore_jr(cand, ops, opts);
    if (objective(a, cand, mu) <= f0) {
      state.step = s * opts.step_grow;
      return cand;
    }
    s *= opts.backtrack_factor;
    if (s < 1e-12 * step0) {
      state.step = step0;
      throw StepCollapse("gradient step underflow");
    }
  }
}

SolveReport bcd(const MatrixXd& a, const RegionSpec& region, const DhTriple& init,
                const SolverOptions& opts) {
  validate(region);
  const auto start = std::chrono::steady_clock::now();
  const int n = static_cast<int>(a.rows());
  const auto ops = region_operators(region, n);

  DhTriple t = init;
  t.enforce_structure();
  SolveReport rep;
  rep.objective_history.push_back(std::sqrt(objective(a, t, mu_for(t.P, opts))));

  StepState step;
  for (int k = 0; k < opts.outer_iters; ++k) {
    const JrResult jr = solve_jr(a, t.P, ops, opts, &t);
    t.J = jr.J;
    t.R = jr.R;
    rep.objective_history.push_back(std::sqrt(objective(a, t, mu_for(t.P, opts))));
    if (k + 1 < opts.outer_iters && opts.gradient_steps) {
      try {
        t = gradient_step(a, t, ops, step, opts);
      } catch (const StepCollapse&) {
        // keep the current iterate; the next sweep re-solves (J, R)
      }
    }
  }

  rep.final_triple = t;
  rep.final_matrix = dh_assemble(t, mu_for(t.P, opts));
  rep.eigenvalues = eigenvalues(rep.final_matrix);
  rep.final_margin = std::min(min_margin(ops, t), lambda_min(t.P));
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace {

// Shared ADMM loop for the two projection problems: minimize
// ||t - t0||^2 subject to eval_i(t) >= 0 (+ optional P-floor cone), with
// either the full triple or only (J, R) free.
ProjectionResult project_impl(const DhTriple& t0,
                              const std::vector<ConstraintOperator>& ops,
                              const SolverOptions& opts, bool p_free, double mu) {
  const int n = t0.size();
  const size_t m = ops.size();
  DhTriple t = t0;
  t.enforce_structure();
  if (p_free) t.P = psd_floor(t.P, mu);

  GramSums gs = gram_sums(ops);
  if (p_free) gs.pp += 1.0;  // the P >= mu I cone enters as eval = P

  std::vector<MatrixXd> z(m), u(m), ev(m), kblk(m);
  for (size_t i = 0; i < m; ++i) {
    if (!p_free)
      kblk[i] = ops[i].eval({MatrixXd::Zero(n, n), MatrixXd::Zero(n, n), t0.P});
    ev[i] = ops[i].eval(t);
    z[i] = psd_project(ev[i]);
    u[i] = MatrixXd::Zero(z[i].rows(), z[i].cols());
  }
  MatrixXd zp, up;
  if (p_free) {
    zp = psd_floor(t.P, mu);
    up = MatrixXd::Zero(n, n);
  }

  double rho = opts.admm_rho;
  ProjectionResult res;
  Residuals rr;
  const MatrixXd mueye = mu * MatrixXd::Identity(n, n);
  for (int it = 0; it < opts.inner_iters; ++it) {
    // (a) strongly convex quadratic step
    MatrixXd adj_j = MatrixXd::Zero(n, n), adj_r = MatrixXd::Zero(n, n),
             adj_p = MatrixXd::Zero(n, n);
    if (p_free) {
      for (size_t i = 0; i < m; ++i) ops[i].add_adjoint(z[i] - u[i], adj_j, adj_r, adj_p);
      adj_p += zp - up;
      const double c11 = 2.0 + rho * gs.rr, c22 = 2.0 + rho * gs.pp,
                   c12 = rho * gs.rp;
      const double det = c11 * c22 - c12 * c12;
      const MatrixXd rhs_r = 2.0 * t0.R + rho * adj_r;
      const MatrixXd rhs_p = 2.0 * t0.P + rho * adj_p;
      t.J = skew((2.0 * t0.J + rho * adj_j) / (2.0 + rho * gs.jj));
      t.R = sym((c22 * rhs_r - c12 * rhs_p) / det);
      t.P = sym((c11 * rhs_p - c12 * rhs_r) / det);
    } else {
      for (size_t i = 0; i < m; ++i)
        ops[i].add_adjoint(kblk[i] - z[i] + u[i], adj_j, adj_r, adj_p);
      t.J = skew((2.0 * t0.J - rho * adj_j) / (2.0 + rho * gs.jj));
      t.R = sym((2.0 * t0.R - rho * adj_r) / (2.0 + rho * gs.rr));
    }

    // (b) + (c)
    double prim2 = 0, nrm_ev = 0, nrm_z = 0;
    MatrixXd dz_j = MatrixXd::Zero(n, n), dz_r = MatrixXd::Zero(n, n),
             dz_p = MatrixXd::Zero(n, n);
    MatrixXd uj = MatrixXd::Zero(n, n), ur = MatrixXd::Zero(n, n),
             up_acc = MatrixXd::Zero(n, n);
    for (size_t i = 0; i < m; ++i) {
      ev[i] = ops[i].eval(t);
      const MatrixXd znew = psd_project(ev[i] + u[i]);
      ops[i].add_adjoint(znew - z[i], dz_j, dz_r, dz_p);
      u[i] += ev[i] - znew;
      z[i] = znew;
      prim2 += (ev[i] - z[i]).squaredNorm();
      nrm_ev += ev[i].squaredNorm();
      nrm_z += z[i].squaredNorm();
      ops[i].add_adjoint(u[i], uj, ur, up_acc);
    }
    if (p_free) {
      const MatrixXd znew = mueye + psd_project(t.P + up - mueye);
      dz_p += znew - zp;
      up += t.P - znew;
      zp = znew;
      prim2 += (t.P - zp).squaredNorm();
      nrm_ev += t.P.squaredNorm();
      nrm_z += zp.squaredNorm();
      up_acc += up;
    }
    rr.primal = std::sqrt(prim2);
    double d2 = dz_j.squaredNorm() + dz_r.squaredNorm();
    double ud2 = uj.squaredNorm() + ur.squaredNorm();
    if (p_free) {
      d2 += dz_p.squaredNorm();
      ud2 += up_acc.squaredNorm();
    }
    rr.dual = rho * std::sqrt(d2);
    rr.eps_pri = std::max(1.0, std::sqrt(std::max(nrm_ev, nrm_z)));
    rr.eps_dual = std::max(1.0, rho * std::sqrt(ud2));
    res.iters = it + 1;
    if (rr.done(opts.inner_tol)) {
      res.converged = true;
      break;
    }
    if ((it + 1) % 25 == 0) {
      if (rr.primal > 10.0 * rr.dual * rr.eps_pri / rr.eps_dual) {
        rho *= 2.0;
        for (auto& ui : u) ui *= 0.5;
        if (p_free) up *= 0.5;
      } else if (rr.dual * rr.eps_pri / rr.eps_dual > 10.0 * rr.primal) {
        rho *= 0.5;
        for (auto& ui : u) ui *= 2.0;
        if (p_free) up *= 2.0;
      }
    }
  }
  res.triple = t;
  if (!p_free) res.triple.P = t0.P;
  return res;
}

}  // namespace

ProjectionResult project_triple_full(const DhTriple& t0, const RegionSpec& region,
                                     const SolverOptions& opts) {
  validate(region);
  const auto ops = region_operators(region, t0.size());
  const double mu = opts.mu_floor > 0 ? opts.mu_floor : default_mu(sym(t0.P));
  return project_impl(t0, ops, opts, /*p_free=*/true, mu);
}

DhTriple project_triple(const DhTriple& t0, const RegionSpec& region,
                        const SolverOptions& opts) {
  return project_triple_full(t0, region, opts).triple;
}

DhTriple restore_jr(const DhTriple& t0, const std::vector<ConstraintOperator>& ops,
                    const SolverOptions& opts) {
  SolverOptions tuned = opts;
  tuned.inner_iters = std::max(opts.inner_iters, 2000);
  ProjectionResult pr = project_impl(t0, ops, tuned, /*p_free=*/false, 0.0);
  return pr.triple;
}

}  // namespace omegastab
