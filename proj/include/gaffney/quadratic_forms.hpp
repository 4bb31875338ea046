#pragma once

#include <iosfwd>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gaffney/calculus.hpp"
#include "gaffney/mesh.hpp"

namespace gaffney {

/// The four quadratic forms of the inequality, assembled on one mesh for
/// P1 vector fields with interleaved DOFs. All element integrals are
/// closed-form, so u^T A u etc. are the exact integrals of the piecewise
/// polynomial integrands:
///   u^T A u = int |grad omega|^2      u^T D u = int (|curl|^2 + |div|^2)
///   u^T M u = int |omega|^2           u^T T u = int_boundary |omega|^2
struct QuadraticForms {
  Eigen::SparseMatrix<double> A, D, M, T;
  int dof_count = 0;
};

QuadraticForms assemble(const Mesh& m);

struct GaffneyQuotient {
  double grad_energy = 0.0;
  double curl_div_energy = 0.0;
  double mass = 0.0;
  double ratio = 0.0;  ///< grad / (curl+div + mass)
};

GaffneyQuotient quotient(const QuadraticForms& q, const Eigen::VectorXd& u);

/// |LHS - RHS| of the Lipschitz-pair identity
///   int_boundary f1 (d2 f2 nu1 - d1 f2 nu2) = int (d1 f1 d2 f2 - d1 f2 d2 f1)
/// for a piecewise-linear field f = (f1, f2), both sides integrated exactly.
double ibp_identity_residual(const Mesh& m, const FemField& f);

/// Coordinate text format: "row col value" per entry, 17 significant
/// digits, sorted by (row, col).
void write_coo(std::ostream& os, const Eigen::SparseMatrix<double>& m);

}  // namespace gaffney
