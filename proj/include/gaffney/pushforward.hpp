#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gaffney/calculus.hpp"

namespace gaffney {

/// Differentiable map with optional exact Jacobian and inverse. Missing
/// Jacobians fall back to central differences with step 1e-6; missing
/// inverses fall back to damped Newton.
struct SmoothMap {
  int dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> forward;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> inverse;
};

Eigen::MatrixXd map_jacobian(const SmoothMap& m, const Eigen::VectorXd& x);

/// Solves m.forward(x) = y by damped Newton from `guess`, tolerance 1e-10,
/// at most 50 iterations. Throws std::runtime_error on failure.
Eigen::VectorXd invert_map(const SmoothMap& m, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& guess);

/// Pushforward (Phi_* omega)(y) = grad Phi(Phi^-1(y)) omega(Phi^-1(y)).
Eigen::VectorXd pushforward(const SmoothMap& m, const AnalyticField& f,
                            const Eigen::VectorXd& y);
Eigen::VectorXd pushforward(
    const SmoothMap& m,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& y);

/// Exact pushforward through the affine map psi(u) = A u + b.
AnalyticField pushforward_linear(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& b,
                                 const AnalyticField& f);

/// Absolute differences of |grad|^2, |curl|^2, |div|^2 between the field at
/// u and its pushforward under psi(u) = A u + b at psi(u). A must be
/// orthogonal to 1e-12.
std::array<double, 3> orthogonal_invariance_residual(const Eigen::MatrixXd& A,
                                                     const Eigen::VectorXd& b,
                                                     const AnalyticField& f,
                                                     const Eigen::VectorXd& u);

/// Completion of dir/|dir| to a positively oriented orthonormal basis, by
/// Gram-Schmidt over the coordinate axes in index order.
Eigen::MatrixXd rotation_from_direction(const Eigen::VectorXd& dir);

/// Local rectification of a nonvanishing field lambda around x0: the
/// forward map Psi integrates the flow of lambda for time x1 from
/// x0 + A (0, x2, ..., xn), with A in SO(n) whose first column is
/// lambda(x0)/|lambda(x0)|; the rectifier Phi = Psi^-1 then satisfies
/// Phi_*(lambda) = e1 on the validity box [-r, r]^n with Phi(x0) = 0.
///
/// Integration is classical fourth-order Runge-Kutta with the variational
/// equation carried alongside; the step count is fixed at construction so
/// that halving the step changes Psi by less than 1e-10 at probe points.
class FlowMap {
 public:
  FlowMap(AnalyticField lambda, Eigen::VectorXd x0, double r);

  int dimension() const { return dim_; }
  const Eigen::MatrixXd& rotation() const { return rotation_; }
  const Eigen::VectorXd& base_point() const { return x0_; }
  double radius() const { return r_; }
  int step_count() const { return steps_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;           // Psi
  Eigen::MatrixXd forward_jacobian(const Eigen::VectorXd& x) const;  // grad Psi
  Eigen::VectorXd inverse(const Eigen::VectorXd& y) const;           // Phi
  /// grad Phi at Phi(y) ... evaluated without Newton as (grad Psi(x))^-1.
  Eigen::MatrixXd inverse_jacobian_from(const Eigen::VectorXd& x) const;
  /// Phi_*(lambda)(x) = (grad Psi(x))^-1 lambda(Psi(x)); exactly e1 up to
  /// integration error.
  Eigen::VectorXd pushforward_lambda(const Eigen::VectorXd& x) const;
  /// The rectifier Phi as a SmoothMap (forward = Phi, inverse = Psi).
  SmoothMap rectifier() const;

 private:
  void integrate(double time, const Eigen::VectorXd& start,
                 Eigen::VectorXd* y_out, Eigen::MatrixXd* jac_out) const;
  Eigen::VectorXd initial_point(const Eigen::VectorXd& x) const;

  AnalyticField lambda_;
  Eigen::VectorXd x0_;
  double r_ = 0.0;
  int dim_ = 0;
  Eigen::MatrixXd rotation_;
  int steps_ = 0;
};

FlowMap rectify_flow(const AnalyticField& lambda, const Eigen::VectorXd& x0,
                     double r);

/// max over pts of |Phi_*(lambda)(p) - e1|.
double rectification_residual(const FlowMap& fm, const AnalyticField& lambda,
                              const std::vector<Eigen::VectorXd>& pts);

}  // namespace gaffney
