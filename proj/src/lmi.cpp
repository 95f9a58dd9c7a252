#include "omegastab/lmi.hpp"

#include <cmath>

namespace omegastab {

ConstraintOperator ConstraintOperator::single(std::string label, int n, Coeff diag) {
  ConstraintOperator op;
  op.label_ = std::move(label);
  op.n_ = n;
  op.paired_ = false;
  op.diag_ = diag;
  return op;
}

ConstraintOperator ConstraintOperator::paired(std::string label, int n, Coeff diag,
                                              Coeff off) {
  ConstraintOperator op;
  op.label_ = std::move(label);
  op.n_ = n;
  op.paired_ = true;
  op.diag_ = diag;
  op.off_ = off;
  return op;
}

MatrixXd ConstraintOperator::eval(const DhTriple& t) const {
  const MatrixXd d = diag_.r * t.R + diag_.p * t.P;
  if (!paired_) return d;
  const MatrixXd b = off_.j * t.J + off_.r * t.R + off_.p * t.P;
  MatrixXd out(2 * n_, 2 * n_);
  out.topLeftCorner(n_, n_) = d;
  out.topRightCorner(n_, n_) = b;
  out.bottomLeftCorner(n_, n_) = b.transpose();
  out.bottomRightCorner(n_, n_) = d;
  return out;
}

void ConstraintOperator::add_adjoint(const MatrixXd& s, MatrixXd& grad_j,
                                     MatrixXd& grad_r, MatrixXd& grad_p) const {
  if (!paired_) {
    const MatrixXd ss = sym(s);
    grad_r += diag_.r * ss;
    grad_p += diag_.p * ss;
    return;
  }
  const MatrixXd t = sym(s.topLeftCorner(n_, n_) + s.bottomRightCorner(n_, n_));
  const MatrixXd s12 = s.topRightCorner(n_, n_);
  grad_j += off_.j * (s12 - s12.transpose());           // 2 skew(S12)
  grad_r += diag_.r * t + off_.r * (s12 + s12.transpose());
  grad_p += diag_.p * t + off_.p * (s12 + s12.transpose());
}

double ConstraintOperator::gram_jj() const { return paired_ ? 2.0 * off_.j * off_.j : 0.0; }
double ConstraintOperator::gram_rr() const {
  return paired_ ? 2.0 * (diag_.r * diag_.r + off_.r * off_.r) : diag_.r * diag_.r;
}
double ConstraintOperator::gram_rp() const {
  return paired_ ? 2.0 * (diag_.r * diag_.p + off_.r * off_.p) : diag_.r * diag_.p;
}
double ConstraintOperator::gram_pp() const {
  return paired_ ? 2.0 * (diag_.p * diag_.p + off_.p * off_.p) : diag_.p * diag_.p;
}

ConstraintOperator conic_operator(const ConicSector& sec, int n) {
  const double al = sec.alpha(), be = sec.beta(), a = sec.apex;
  if (be < 1e-14) {
    // theta = pi/2: the paired form is block-diagonal with R + aP twice.
    return ConstraintOperator::single("sector", n, {0.0, al, al * a});
  }
  return ConstraintOperator::paired("sector", n, {0.0, al, al * a}, {-be, 0.0, 0.0});
}

std::vector<ConstraintOperator> strip_operators(const VerticalStrip& strip, int n) {
  std::vector<ConstraintOperator> ops;
  if (strip.k_finite())
    ops.push_back(ConstraintOperator::single("strip.k", n, {0.0, -1.0, strip.k}));
  if (strip.h_finite())
    ops.push_back(ConstraintOperator::single("strip.h", n, {0.0, 1.0, -strip.h}));
  return ops;
}

ConstraintOperator disk_operator(const Disk& d, int n) {
  return ConstraintOperator::paired("disk", n, {0.0, 0.0, d.radius},
                                    {-1.0, 1.0, -d.q()});
}

std::vector<ConstraintOperator> region_operators(const RegionSpec& region, int n) {
  validate(region);
  std::vector<ConstraintOperator> ops;
  for (const auto& s : region.sectors) ops.push_back(conic_operator(s, n));
  if (region.strip)
    for (auto& op : strip_operators(*region.strip, n)) ops.push_back(std::move(op));
  for (const auto& d : region.disks) ops.push_back(disk_operator(d, n));
  return ops;
}

double min_margin(const std::vector<ConstraintOperator>& ops, const DhTriple& t) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& op : ops) m = std::min(m, lambda_min(op.eval(t)));
  return m;
}

// --- X operators --------------------------------------------------------------

FeasibilityOperatorX::FeasibilityOperatorX(Kind kind, std::string label,
                                           const MatrixXd& a, double c0, double c1)
    : kind_(kind), label_(std::move(label)), a_(a), n_(static_cast<int>(a.rows())),
      c0_(c0), c1_(c1) {}

int FeasibilityOperatorX::dim() const {
  return (kind_ == Kind::Sector || kind_ == Kind::Disk) ? 2 * n_ : n_;
}

MatrixXd FeasibilityOperatorX::eval(const MatrixXd& x) const {
  const MatrixXd ax = a_ * x;
  switch (kind_) {
    case Kind::Sector: {
      const double theta = c0_, apex = c1_;
      const double al = std::sin(theta), be = std::cos(theta);
      const MatrixXd y = ax + ax.transpose() - 2.0 * apex * x;
      const MatrixXd z = ax - ax.transpose();
      MatrixXd out(2 * n_, 2 * n_);
      out.topLeftCorner(n_, n_) = -al * y;
      out.topRightCorner(n_, n_) = -be * z;
      out.bottomLeftCorner(n_, n_) = be * z;
      out.bottomRightCorner(n_, n_) = -al * y;
      return out;
    }
    case Kind::SectorHalfPlane:
      return -(ax + ax.transpose() - 2.0 * c1_ * x);
    case Kind::StripH:
      return -(ax + ax.transpose() + 2.0 * c0_ * x);
    case Kind::StripK:
      return ax + ax.transpose() + 2.0 * c0_ * x;
    case Kind::Disk: {
      const double q = c0_, r = c1_;
      MatrixXd out(2 * n_, 2 * n_);
      out.topLeftCorner(n_, n_) = r * x;
      out.topRightCorner(n_, n_) = -q * x - ax;
      out.bottomLeftCorner(n_, n_) = -q * x - ax.transpose();
      out.bottomRightCorner(n_, n_) = r * x;
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

MatrixXd FeasibilityOperatorX::adjoint(const MatrixXd& s) const {
  switch (kind_) {
    case Kind::Sector: {
      const double theta = c0_, apex = c1_;
      const double al = std::sin(theta), be = std::cos(theta);
      const MatrixXd t = sym(s.topLeftCorner(n_, n_) + s.bottomRightCorner(n_, n_));
      const MatrixXd s12 = s.topRightCorner(n_, n_);
      const MatrixXd k = s12.transpose() - s12;
      return sym(-al * (a_.transpose() * t + t * a_ - 2.0 * apex * t) +
                 be * (a_.transpose() * k - k * a_));
    }
    case Kind::SectorHalfPlane: {
      const MatrixXd t = sym(s);
      return sym(-(a_.transpose() * t + t * a_ - 2.0 * c1_ * t));
    }
    case Kind::StripH: {
      const MatrixXd t = sym(s);
      return sym(-(a_.transpose() * t + t * a_ + 2.0 * c0_ * t));
    }
    case Kind::StripK: {
      const MatrixXd t = sym(s);
      return sym(a_.transpose() * t + t * a_ + 2.0 * c0_ * t);
    }
    case Kind::Disk: {
      const double q = c0_, r = c1_;
      const MatrixXd t = sym(s.topLeftCorner(n_, n_) + s.bottomRightCorner(n_, n_));
      const MatrixXd s12 = s.topRightCorner(n_, n_);
      return sym(r * t - q * (s12 + s12.transpose()) - a_.transpose() * s12 -
                 s12.transpose() * a_);
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<FeasibilityOperatorX> feasibility_operators_in_x(const RegionSpec& region,
                                                             const MatrixXd& a) {
  validate(region);
  if (a.rows() != a.cols()) throw InvalidParameter("feasibility operators: A not square");
  std::vector<FeasibilityOperatorX> ops;
  using K = FeasibilityOperatorX::Kind;
  for (const auto& s : region.sectors) {
    if (s.beta() < 1e-14)
      ops.emplace_back(K::SectorHalfPlane, "sector", a, s.theta, s.apex);
    else
      ops.emplace_back(K::Sector, "sector", a, s.theta, s.apex);
  }
  if (region.strip) {
    if (region.strip->k_finite())
      ops.emplace_back(K::StripK, "strip.k", a, region.strip->k, 0.0);
    if (region.strip->h_finite())
      ops.emplace_back(K::StripH, "strip.h", a, region.strip->h, 0.0);
  }
  for (const auto& d : region.disks) ops.emplace_back(K::Disk, "disk", a, d.q(), d.radius);
  return ops;
}

double min_margin_x(const std::vector<FeasibilityOperatorX>& ops, const MatrixXd& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& op : ops) m = std::min(m, lambda_min(op.eval(x)));
  return m;
}

// --- svec ----------------------------------------------------------------------

int svec_size(int n) { return n * (n + 1) / 2; }

VectorXd svec(const MatrixXd& s) {
  const int n = static_cast<int>(s.rows());
  VectorXd v(svec_size(n));
  const double rt2 = std::sqrt(2.0);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) v(k++) = (i == j) ? s(i, j) : rt2 * s(i, j);
  return v;
}

MatrixXd smat(const VectorXd& v, int n) {
  MatrixXd s(n, n);
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      const double val = (i == j) ? v(k) : inv_rt2 * v(k);
      s(i, j) = val;
      s(j, i) = val;
      ++k;
    }
  return s;
}

MatrixXd dense_matrix(const FeasibilityOperatorX& op) {
  const int n = op.input_size();
  const int in_dim = svec_size(n), out_dim = svec_size(op.dim());
  MatrixXd m(out_dim, in_dim);
  VectorXd e = VectorXd::Zero(in_dim);
  for (int k = 0; k < in_dim; ++k) {
    e(k) = 1.0;
    m.col(k) = svec(op.eval(smat(e, n)));
    e(k) = 0.0;
  }
  return m;
}

}  // namespace omegastab
