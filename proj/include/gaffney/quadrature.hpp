#pragma once

#include <functional>

#include <Eigen/Dense>

namespace gaffney {

struct Mesh;

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomials.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  ///< |last - previous| of the escalation sequence
  bool converged = false;
  int order = 0;  ///< points per direction at which the sequence stopped
};

/// Integrals below escalate the Gauss order (4, 8, 16, ...) until two
/// successive orders agree to rel_tol, and report the last difference as the
/// error estimate.
QuadResult integrate_interval(const std::function<double(double)>& f, double a,
                              double b, double rel_tol = 1e-10);

QuadResult integrate_triangle(const std::function<double(const Eigen::Vector2d&)>& f,
                              const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                              const Eigen::Vector2d& p2, double rel_tol = 1e-10);

/// Composite rule over all triangles of a mesh, escalated globally.
QuadResult integrate_mesh(const std::function<double(const Eigen::Vector2d&)>& f,
                          const Mesh& m, double rel_tol = 1e-10);

/// Composite rule over all boundary edges of a mesh.
QuadResult integrate_boundary(const std::function<double(const Eigen::Vector2d&)>& f,
                              const Mesh& m, double rel_tol = 1e-10);

/// Tensor-product Gauss rule over the axis-aligned box [lo, hi].
QuadResult integrate_box(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                         double rel_tol = 1e-10);

}  // namespace gaffney
