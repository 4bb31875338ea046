#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gaffney/mesh.hpp"

namespace gaffney {

/// Scalar function on R^n with a hand-coded exact gradient.
struct ScalarFunction {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

/// Closed-form vector field carrying exact first partials per component.
class AnalyticField {
 public:
  AnalyticField() = default;
  AnalyticField(int dim, std::vector<ScalarFunction> components);

  int dimension() const { return dim_; }
  const ScalarFunction& component(int i) const { return comps_[i]; }

  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
  /// jacobian(i, j) = d omega_i / d x_j
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

 private:
  int dim_ = 0;
  std::vector<ScalarFunction> comps_;
};

/// Antisymmetric pair-indexed value: generalized cross products and curls.
/// Only components (i, j) with i < j are stored, in lexicographic order
/// (0,1), (0,2), ..., (0,n-1), (1,2), ...
struct CrossValue {
  int dim = 0;
  Eigen::VectorXd comp;

  static int pair_count(int n) { return n * (n - 1) / 2; }
  static int pair_index(int n, int i, int j);
  /// Antisymmetric accessor: at(j, i) == -at(i, j), at(i, i) == 0.
  double at(int i, int j) const;
  double norm_squared() const { return comp.squaredNorm(); }
};

/// (a x b)_{ij} = a_i b_j - a_j b_i
CrossValue cross(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

CrossValue curl_from_jacobian(const Eigen::MatrixXd& jac);
double div_from_jacobian(const Eigen::MatrixXd& jac);
/// LHS - RHS of |curl|^2 + |div|^2 - |grad|^2 = 2 sum_{i<j} (J_ii J_jj - J_ij J_ji).
double identity_residual_from_jacobian(const Eigen::MatrixXd& jac);

/// Continuous piecewise-linear nodal vector field. DOFs are interleaved per
/// vertex: (x1-component, x2-component).
class FemField {
 public:
  FemField(const Mesh& mesh, Eigen::VectorXd dofs);

  const Mesh& mesh() const { return *mesh_; }
  const Eigen::VectorXd& dofs() const { return dofs_; }
  Eigen::Vector2d vertex_value(int v) const;

  Eigen::Vector2d value_in(int tri, const Eigen::Vector2d& x) const;
  /// Constant per triangle; (i, j) entry is d omega_i / d x_j.
  Eigen::Matrix2d jacobian_in(int tri) const;

  /// Evaluation with point location; shared edges/vertices resolve to the
  /// lowest adjacent triangle index. Throws std::domain_error outside.
  Eigen::Vector2d value_at(const Eigen::Vector2d& x) const;
  Eigen::Matrix2d jacobian_at(const Eigen::Vector2d& x) const;

 private:
  int locate_or_throw(const Eigen::Vector2d& x) const;
  const Mesh* mesh_ = nullptr;
  Eigen::VectorXd dofs_;
};

/// Nodal interpolant of a 2D analytic field; exact for affine components.
FemField interpolate(const AnalyticField& f, const Mesh& m);

CrossValue curl_at(const AnalyticField& f, const Eigen::VectorXd& x);
double div_at(const AnalyticField& f, const Eigen::VectorXd& x);
Eigen::MatrixXd grad_at(const AnalyticField& f, const Eigen::VectorXd& x);
double pointwise_identity_residual(const AnalyticField& f, const Eigen::VectorXd& x);

CrossValue curl_at(const FemField& f, const Eigen::Vector2d& x);
double div_at(const FemField& f, const Eigen::Vector2d& x);
Eigen::MatrixXd grad_at(const FemField& f, const Eigen::Vector2d& x);
double pointwise_identity_residual(const FemField& f, const Eigen::Vector2d& x);

/// Tangential derivative d_ij[f] = nu_j df/dx_i - nu_i df/dx_j on a boundary
/// edge, using the edge's stored normal. Indices are 1-based and must
/// satisfy 1 <= i < j <= 2; x must lie on the edge.
double tangential_derivative(const ScalarFunction& f, const Mesh& m,
                             const Edge& e, int i, int j,
                             const Eigen::Vector2d& x);

/// Max relative deviation between the coded partials and central finite
/// differences over the sample points (the transcription-error guard).
double max_partial_deviation(const AnalyticField& f,
                             const std::vector<Eigen::VectorXd>& pts);

}  // namespace gaffney
