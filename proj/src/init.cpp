#include "omegastab/init.hpp"

#include <cmath>

namespace omegastab {

InitResult identity_init(const MatrixXd& a, const RegionSpec& region,
                         const SolverOptions& opts) {
  validate(region);
  const int n = static_cast<int>(a.rows());
  const auto ops = region_operators(region, n);
  const JrResult jr = solve_jr(a, MatrixXd::Identity(n, n), ops, opts);
  InitResult res;
  res.triple = {jr.J, jr.R, MatrixXd::Identity(n, n)};
  return res;
}

InitResult true_init(const DhTriple& t, const MatrixXd& a, const RegionSpec& region,
                     const SolverOptions& opts) {
  validate(region);
  const auto ops = region_operators(region, t.size());
  const JrResult jr = solve_jr(a, t.P, ops, opts, &t);
  InitResult res;
  res.triple = {jr.J, jr.R, sym(t.P)};
  return res;
}

namespace {

// Product-space feasibility machinery for the relaxed LMIs: variables
// (X, S_1..S_m) with the consistency subspace {S_i = L_i(X)} and the cone
// blocks {X >= I, S_i >= -delta I}. Projection onto the subspace is a
// presolved positive definite solve in svec coordinates; the cones project
// blockwise. The subspace projection is delta-independent, so one
// factorization serves the entire bisection.
class RelaxedFeasibility {
public:
  RelaxedFeasibility(const MatrixXd& a, const std::vector<FeasibilityOperatorX>& ops,
                     double feas_tol, int max_iters)
      : ops_(ops), n_(static_cast<int>(a.rows())), feas_tol_(feas_tol),
        max_iters_(max_iters) {
    const int in_dim = svec_size(n_);
    MatrixXd gram = MatrixXd::Identity(in_dim, in_dim);
    mats_.reserve(ops.size());
    for (const auto& op : ops) {
      mats_.push_back(dense_matrix(op));
      gram += mats_.back().transpose() * mats_.back();
    }
    llt_.compute(gram);
    if (llt_.info() != Eigen::Success)
      throw NumericalBreakdown("relaxed feasibility: gram factorization failed");
  }

  // Margin of a consistent point: min over the X-cone and all shifted cones.
  double margin(const MatrixXd& x, double delta) const {
    double m = lambda_min(x - MatrixXd::Identity(n_, n_));
    for (const auto& op : ops_) m = std::min(m, lambda_min(op.eval(x)) + delta);
    return m;
  }

  // Alternating projections; returns the first consistent iterate whose
  // margin clears -feas_tol, or nullopt when the budget runs out.
  std::optional<MatrixXd> find_point(double delta, const MatrixXd& x0) const {
    const size_t m = ops_.size();
    MatrixXd x = sym(x0);
    std::vector<MatrixXd> s(m);
    for (size_t i = 0; i < m; ++i) s[i] = ops_[i].eval(x);
    for (int it = 0; it < max_iters_; ++it) {
      if (margin(x, delta) >= -feas_tol_) return x;
      // cone blocks
      const MatrixXd xc =
          MatrixXd::Identity(n_, n_) + psd_project(x - MatrixXd::Identity(n_, n_));
      VectorXd rhs = svec(xc);
      for (size_t i = 0; i < m; ++i) {
        const int d = ops_[i].dim();
        const MatrixXd sc =
            psd_project(s[i] + delta * MatrixXd::Identity(d, d)) -
            delta * MatrixXd::Identity(d, d);
        rhs += mats_[i].transpose() * svec(sc);
      }
      // consistency subspace
      const VectorXd xv = llt_.solve(rhs);
      x = smat(xv, n_);
      for (size_t i = 0; i < m; ++i) s[i] = smat(mats_[i] * xv, ops_[i].dim());
    }
    return std::nullopt;
  }

private:
  const std::vector<FeasibilityOperatorX>& ops_;
  std::vector<MatrixXd> mats_;
  Eigen::LLT<MatrixXd> llt_;
  int n_;
  double feas_tol_;
  int max_iters_;
};

}  // namespace

InitResult lmi_init(const MatrixXd& a, const RegionSpec& region,
                    const SolverOptions& opts) {
  validate(region);
  const int n = static_cast<int>(a.rows());
  const auto xops = feasibility_operators_in_x(region, a);

  double worst = 0.0;
  for (const auto& op : xops)
    worst = std::max(worst, -lambda_min(op.eval(MatrixXd::Identity(n, n))));
  const double delta_hi = worst + 1.0;
  const double bisect_tol =
      opts.bisect_tol > 0 ? opts.bisect_tol : 1e-6 * (1.0 + delta_hi);
  const double feas_tol = 1e-7 * std::max(1.0, a.norm());

  RelaxedFeasibility feas(a, xops, feas_tol, opts.inner_iters);

  double delta_star;
  MatrixXd x_star;
  const MatrixXd eye = MatrixXd::Identity(n, n);
  if (auto x = feas.find_point(0.0, eye)) {
    delta_star = 0.0;
    x_star = *x;
  } else {
    auto hi_point = feas.find_point(delta_hi, eye);
    if (!hi_point)
      throw NonConvergence("lmi_init: relaxation infeasible at delta_hi");
    double lo = 0.0, hi = delta_hi;
    x_star = *hi_point;
    while (hi - lo > bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      if (auto x = feas.find_point(mid, x_star)) {
        hi = mid;
        x_star = *x;
      } else {
        lo = mid;
      }
    }
    delta_star = hi;
  }

  // Exact X >= I before the constructive converse.
  x_star = eye + psd_project(x_star - eye);

  InitResult res;
  res.triple = dh_from_x(a, x_star);
  res.delta_star = delta_star;
  res.certificate = delta_star <= opts.cert_tol;
  res.x_star = x_star;
  return res;
}

}  // namespace omegastab
