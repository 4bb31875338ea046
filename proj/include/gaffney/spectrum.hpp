#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaffney/boundary.hpp"
#include "gaffney/mesh.hpp"
#include "gaffney/quadratic_forms.hpp"

namespace gaffney {

/// All eigenpairs of A v = mu B v for symmetric A and positive definite B,
/// ordered by descending eigenvalue with B-orthonormal eigenvectors.
struct EigenSolution {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  ///< one column per eigenvalue
};

/// Dense solve by Cholesky reduction of B to standard form followed by a
/// symmetric QR-class eigensolver. Throws std::invalid_argument naming the
/// failing pivot when B is not positive definite.
EigenSolution solve_gevp(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Discrete optimal constant on one mesh: the top eigenvalue of the pencil
/// (Z^T A Z, Z^T (D + M) Z) over the admissible subspace spanned by Z.
struct GaffneyEstimate {
  int level = 1;
  double h = 0.0;          ///< longest edge
  int free_count = 0;      ///< columns of Z
  double lambda_max = 0.0;
  Eigen::VectorXd eigenfield;  ///< full DOF vector, unit B-norm, in range(Z)
  double residual = 0.0;   ///< ||Ar v - lambda Br v|| / ||Ar||_F (reduced)
};

GaffneyEstimate gaffney_constant(const Mesh& m, const BoundarySpec& spec);

/// One estimate per refinement level of the named benchmark domain.
std::vector<GaffneyEstimate> refinement_study(const std::string& domain, int k,
                                              const BoundarySpec& spec,
                                              int levels);

/// Smallest c with x^T T x <= eps x^T A x + (c/eps) x^T M x for all x,
/// i.e. c = eps * max(0, lambda_max(T - eps A, M)), with the witness field.
struct TraceEstimate {
  double eps = 0.0;
  double c = 0.0;
  Eigen::VectorXd witness;
};

TraceEstimate trace_constant(const Mesh& m, double eps);

}  // namespace gaffney
