#pragma once

#include <Eigen/Dense>
#include <string>

#include "omegastab/errors.hpp"
#include "omegastab/rng.hpp"

namespace omegastab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Decision variables of the dissipative-Hamiltonian form X = (J - R) P^{-1}:
// J skew-symmetric, R symmetric, P symmetric positive semidefinite.
struct DhTriple {
  MatrixXd J;
  MatrixXd R;
  MatrixXd P;

  int size() const { return static_cast<int>(J.rows()); }

  static DhTriple zero(int n) {
    return {MatrixXd::Zero(n, n), MatrixXd::Zero(n, n), MatrixXd::Zero(n, n)};
  }

  // Enforce J skew, R/P symmetric by orthogonal projection.
  void enforce_structure();

  double norm() const;
};

DhTriple operator+(const DhTriple& a, const DhTriple& b);
DhTriple operator-(const DhTriple& a, const DhTriple& b);
DhTriple operator*(double c, const DhTriple& t);

// Frobenius inner product over the stacked triple.
double dot(const DhTriple& a, const DhTriple& b);

inline MatrixXd sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }
inline MatrixXd skew(const MatrixXd& m) { return 0.5 * (m - m.transpose()); }

// Frobenius-nearest PSD matrix: clip negative eigenvalues to zero.
// Throws NotSymmetric if ||S - S^T||_F > 1e-10 * max(1, ||S||_F).
MatrixXd psd_project(const MatrixXd& s);

// As psd_project but eigenvalues are floored at `floor` instead of 0.
MatrixXd psd_floor(const MatrixXd& s, double floor);

// M = sym + skew with sym symmetric and skew skew-symmetric.
void sym_skew_split(const MatrixXd& m, MatrixXd& sym_out, MatrixXd& skew_out);

// Inverse of P with eigenvalues floored at mu > 0 before inversion.
// Exact inverse whenever lambda_min(P) >= mu.
MatrixXd regularized_inverse(const MatrixXd& p, double mu);

// Default inversion floor: 1e-9 * trace(P)/n, clamped away from zero.
double default_mu(const MatrixXd& p);

// (J - R) * regularized_inverse(P, mu).
MatrixXd dh_assemble(const DhTriple& t, double mu);

// Constructive converse: J = (AX - XA^T)/2, R = -(AX + XA^T)/2, P = X.
// Requires X symmetric positive definite; dh_assemble then reproduces A.
DhTriple dh_from_x(const MatrixXd& a, const MatrixXd& x);

double lambda_min(const MatrixXd& s);

// Eigenvalues of a general real square matrix.
Eigen::VectorXcd eigenvalues(const MatrixXd& a);

// Entrywise standard-normal draws, optionally structure-projected.
MatrixXd randn_matrix(int rows, int cols, Rng& rng);

// --- matrix file I/O ------------------------------------------------------
// Plain CSV (one row per line) and self-describing JSON
// {"rows":n,"cols":n,"data":[...]} with row-major data. Values are written
// with 17 significant digits so doubles round-trip exactly.

void write_matrix_csv(const MatrixXd& m, const std::string& path);
MatrixXd read_matrix_csv(const std::string& path);

void write_matrix_json(const MatrixXd& m, const std::string& path);
MatrixXd read_matrix_json(const std::string& path);

// Dispatch on extension (.csv / .json).
MatrixXd read_matrix(const std::string& path);
void write_matrix(const MatrixXd& m, const std::string& path);

// 17-significant-digit decimal form used by all serializers.
std::string format_double(double v);

}  // namespace omegastab
