#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omegastab/numkernel.hpp"
#include "omegastab/region.hpp"

namespace omegastab {

// Linear symmetric-matrix-valued map of (J, R, P). Every block of every
// region operator is a scalar combination of J, R, P, so an operator is a
// pair of coefficient triples rather than a dense vectorized map:
//
//   Single:  eval = r*R + p*P                      (n x n)
//   Paired:  eval = [[D, B], [B^T, D]]             (2n x 2n)
//            D = dr*R + dp*P,  B = bj*J + br*R + bp*P
//
// Feasibility of a triple means eval >= 0 for every operator.
class ConstraintOperator {
public:
  struct Coeff {
    double j = 0.0, r = 0.0, p = 0.0;
  };

  static ConstraintOperator single(std::string label, int n, Coeff diag);
  static ConstraintOperator paired(std::string label, int n, Coeff diag, Coeff off);

  const std::string& label() const { return label_; }
  int input_size() const { return n_; }
  int dim() const { return paired_ ? 2 * n_ : n_; }
  bool is_paired() const { return paired_; }

  MatrixXd eval(const DhTriple& t) const;

  // Structured adjoint: <eval(t), S> = <t, adjoint(S)> for skew J and
  // symmetric R, P. Contributions are accumulated into the output blocks.
  void add_adjoint(const MatrixXd& s, MatrixXd& grad_j, MatrixXd& grad_r,
                   MatrixXd& grad_p) const;

  // Scalar Gram blocks of the map: adjoint(eval(t)) =
  //   (gram_jj*J, gram_rr*R + gram_rp*P, gram_rp*R + gram_pp*P).
  double gram_jj() const;
  double gram_rr() const;
  double gram_rp() const;
  double gram_pp() const;

private:
  ConstraintOperator() = default;

  std::string label_;
  int n_ = 0;
  bool paired_ = false;
  Coeff diag_;
  Coeff off_;
};

// sin(t)*(R + a P) on the diagonal, -cos(t)*J off-diagonal; for t = pi/2
// the off-diagonal vanishes and the operator collapses to R + a P.
ConstraintOperator conic_operator(const ConicSector& sec, int n);

// k P - R (k finite) and/or R - h P (h finite).
std::vector<ConstraintOperator> strip_operators(const VerticalStrip& strip, int n);

// [[r P, -q P - (J - R)], [., r P]] with q = -center.
ConstraintOperator disk_operator(const Disk& d, int n);

// All primitive operators of the region, in declaration order.
std::vector<ConstraintOperator> region_operators(const RegionSpec& region, int n);

// min over operators of lambda_min(eval(t)); >= -tol means closed-feasible.
double min_margin(const std::vector<ConstraintOperator>& ops, const DhTriple& t);

// --- feasibility LMIs in the single variable X -------------------------------
// Negated left-hand sides of the classical region LMIs, so that feasibility
// is uniformly eval(X) >= 0:
//   sector: -[[al(AX+XA^T-2aX), be(AX-XA^T)], [be(XA^T-AX), al(AX+XA^T-2aX)]]
//   strip:  -(AX+XA^T+2hX)  and  +(AX+XA^T+2kX)
//   disk:   [[rX, -qX-AX], [-qX-XA^T, rX]]
class FeasibilityOperatorX {
public:
  enum class Kind { Sector, SectorHalfPlane, StripH, StripK, Disk };

  FeasibilityOperatorX(Kind kind, std::string label, const MatrixXd& a, double c0,
                       double c1);

  const std::string& label() const { return label_; }
  int input_size() const { return n_; }
  int dim() const;

  MatrixXd eval(const MatrixXd& x) const;

  // <eval(X), S> = <X, adjoint(S)> for symmetric X, S.
  MatrixXd adjoint(const MatrixXd& s) const;

private:
  Kind kind_;
  std::string label_;
  MatrixXd a_;
  int n_;
  double c0_, c1_;  // kind-specific scalars: (alpha, apex) | h | k | (q, r)
};

std::vector<FeasibilityOperatorX> feasibility_operators_in_x(const RegionSpec& region,
                                                             const MatrixXd& a);

double min_margin_x(const std::vector<FeasibilityOperatorX>& ops, const MatrixXd& x);

// --- symmetric vectorization --------------------------------------------------
// Isometry between symmetric n x n matrices and R^{n(n+1)/2}: diagonal kept,
// off-diagonals scaled by sqrt(2), so <S1,S2>_F = svec(S1).svec(S2).

int svec_size(int n);
VectorXd svec(const MatrixXd& s);
MatrixXd smat(const VectorXd& v, int n);

// Dense svec-coordinate matrix of an X-operator (columns = images of the
// symmetric basis).
MatrixXd dense_matrix(const FeasibilityOperatorX& op);

}  // namespace omegastab
