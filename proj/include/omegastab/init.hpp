#pragma once

#include <optional>

#include "omegastab/solver.hpp"

namespace omegastab {

struct InitResult {
  DhTriple triple;
  std::optional<double> delta_star;  // absent for identity/true init
  bool certificate = false;          // delta_star present and <= cert_tol
  MatrixXd x_star;                   // relaxed-LMI solution (lmi_init only)
};

// P = I, then (J, R) optimal for that P.
InitResult identity_init(const MatrixXd& a, const RegionSpec& region,
                         const SolverOptions& opts);

// Relax every feasibility LMI to eval(X) >= -delta I, minimize delta over
// X >= I by bisection; each feasibility test alternates between the cone
// blocks and the consistency subspace in a product-space lift. delta* = 0
// exactly when A is already region-stable, which doubles as a certificate.
InitResult lmi_init(const MatrixXd& a, const RegionSpec& region,
                    const SolverOptions& opts);

// Keep the generator's P, re-solve (J, R) for it.
InitResult true_init(const DhTriple& t, const MatrixXd& a, const RegionSpec& region,
                     const SolverOptions& opts);

}  // namespace omegastab
