#include "omegastab/numkernel.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace omegastab {

void DhTriple::enforce_structure() {
  J = skew(J);
  R = sym(R);
  P = sym(P);
}

double DhTriple::norm() const {
  return std::sqrt(J.squaredNorm() + R.squaredNorm() + P.squaredNorm());
}

DhTriple operator+(const DhTriple& a, const DhTriple& b) {
  return {a.J + b.J, a.R + b.R, a.P + b.P};
}

DhTriple operator-(const DhTriple& a, const DhTriple& b) {
  return {a.J - b.J, a.R - b.R, a.P - b.P};
}

DhTriple operator*(double c, const DhTriple& t) { return {c * t.J, c * t.R, c * t.P}; }

double dot(const DhTriple& a, const DhTriple& b) {
  return a.J.cwiseProduct(b.J).sum() + a.R.cwiseProduct(b.R).sum() +
         a.P.cwiseProduct(b.P).sum();
}

namespace {

void require_symmetric(const MatrixXd& s, const char* who) {
  const double drift = (s - s.transpose()).norm();
  if (drift > 1e-10 * std::max(1.0, s.norm())) {
    throw NotSymmetric(std::string(who) + ": asymmetry " + std::to_string(drift));
  }
}

}  // namespace

MatrixXd psd_project(const MatrixXd& s) { return psd_floor(s, 0.0); }

MatrixXd psd_floor(const MatrixXd& s, double floor) {
  require_symmetric(s, "psd_floor");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(s));
  VectorXd lam = es.eigenvalues().cwiseMax(floor);
  return sym(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
}

void sym_skew_split(const MatrixXd& m, MatrixXd& sym_out, MatrixXd& skew_out) {
  sym_out = sym(m);
  skew_out = skew(m);
}

MatrixXd regularized_inverse(const MatrixXd& p, double mu) {
  require_symmetric(p, "regularized_inverse");
  if (!(mu > 0)) throw InvalidParameter("regularized_inverse: mu must be positive");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(p));
  VectorXd inv = es.eigenvalues().cwiseMax(mu).cwiseInverse();
  return sym(es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose());
}

double default_mu(const MatrixXd& p) {
  const double scale = p.trace() / std::max<Eigen::Index>(1, p.rows());
  return 1e-9 * std::max(scale, 1e-8);
}

MatrixXd dh_assemble(const DhTriple& t, double mu) {
  return (t.J - t.R) * regularized_inverse(t.P, mu);
}

DhTriple dh_from_x(const MatrixXd& a, const MatrixXd& x) {
  require_symmetric(x, "dh_from_x");
  if (lambda_min(x) <= 0) throw NotPositiveDefinite("dh_from_x: X is not positive definite");
  const MatrixXd ax = a * x;
  return {skew(ax), -sym(ax), sym(x)};
}

double lambda_min(const MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(s), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::VectorXcd eigenvalues(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidParameter("eigenvalues: matrix not square");
  Eigen::EigenSolver<MatrixXd> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalBreakdown("eigenvalue iteration failed");
  return es.eigenvalues();
}

MatrixXd randn_matrix(int rows, int cols, Rng& rng) {
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void write_matrix_csv(const MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("bad numeric cell '" + cell + "' in " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty matrix file: " + path);
  MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix_json(const MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "{\"rows\":" << m.rows() << ",\"cols\":" << m.cols() << ",\"data\":[";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i || j) out << ',';
      out << format_double(m(i, j));
    }
  out << "]}\n";
  if (!out) throw IoError("write failed: " + path);
}

MatrixXd read_matrix_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad JSON in " + path + ": " + e.what());
  }
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw IoError("matrix JSON missing rows/cols/data: " + path);
  const Eigen::Index rows = j["rows"].get<Eigen::Index>();
  const Eigen::Index cols = j["cols"].get<Eigen::Index>();
  const auto& data = j["data"];
  if (rows <= 0 || cols <= 0 || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw IoError("matrix JSON shape mismatch: " + path);
  MatrixXd m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = data[k++].get<double>();
  return m;
}

namespace {
bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}
}  // namespace

MatrixXd read_matrix(const std::string& path) {
  if (ends_with(path, ".json")) return read_matrix_json(path);
  return read_matrix_csv(path);
}

void write_matrix(const MatrixXd& m, const std::string& path) {
  if (ends_with(path, ".json"))
    write_matrix_json(m, path);
  else
    write_matrix_csv(m, path);
}

}  // namespace omegastab
