#include "gaffney/pushforward.hpp"

#include <cmath>
#include <stdexcept>

namespace gaffney {

namespace {

constexpr double kNewtonTol = 1e-10;
constexpr int kNewtonMaxIter = 50;
constexpr double kOrthogonalityTol = 1e-12;
constexpr double kStepCriterion = 1e-10;
constexpr int kMaxSteps = 1 << 15;
constexpr double kBoxMargin = 1.0;  // safety box is (1 + margin) * r * sqrt(n)

}  // namespace

Eigen::MatrixXd map_jacobian(const SmoothMap& m, const Eigen::VectorXd& x) {
  if (m.jacobian) return m.jacobian(x);
  const double h = 1e-6;
  Eigen::MatrixXd jac(m.dim, m.dim);
  for (int j = 0; j < m.dim; ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    jac.col(j) = (m.forward(xp) - m.forward(xm)) / (2.0 * h);
  }
  return jac;
}

Eigen::VectorXd invert_map(const SmoothMap& m, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& guess) {
  Eigen::VectorXd x = guess;
  double res = (m.forward(x) - y).norm();
  for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
    if (res <= kNewtonTol * (1.0 + y.norm())) return x;
    const Eigen::VectorXd f = m.forward(x) - y;
    const Eigen::VectorXd step = map_jacobian(m, x).partialPivLu().solve(f);
    double alpha = 1.0;
    for (int damp = 0; damp < 12; ++damp) {
      const Eigen::VectorXd trial = x - alpha * step;
      const double trial_res = (m.forward(trial) - y).norm();
      if (trial_res < res) {
        x = trial;
        res = trial_res;
        break;
      }
      alpha *= 0.5;
    }
  }
  if (res <= kNewtonTol * (1.0 + y.norm())) return x;
  throw std::runtime_error("invert_map: Newton iteration did not converge");
}

Eigen::VectorXd pushforward(const SmoothMap& m, const AnalyticField& f,
                            const Eigen::VectorXd& y) {
  const auto eval = [&f](const Eigen::VectorXd& x) { return f.eval(x); };
  return pushforward(m, eval, y);
}

Eigen::VectorXd pushforward(
    const SmoothMap& m,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& y) {
  const Eigen::VectorXd x = m.inverse ? m.inverse(y) : invert_map(m, y, y);
  return map_jacobian(m, x) * f(x);
}

AnalyticField pushforward_linear(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& b,
                                 const AnalyticField& f) {
  const int n = f.dimension();
  if (A.rows() != n || A.cols() != n || b.size() != n)
    throw std::invalid_argument("pushforward_linear: dimension mismatch");
  const Eigen::MatrixXd Ainv = A.inverse();
  std::vector<ScalarFunction> comps(n);
  for (int i = 0; i < n; ++i) {
    comps[i].value = [A, Ainv, b, f, i](const Eigen::VectorXd& x) {
      const Eigen::VectorXd u = Ainv * (x - b);
      double s = 0.0;
      for (int k = 0; k < f.dimension(); ++k)
        s += A(i, k) * f.component(k).value(u);
      return s;
    };
    comps[i].gradient = [A, Ainv, b, f, i](const Eigen::VectorXd& x) {
      const Eigen::VectorXd u = Ainv * (x - b);
      Eigen::VectorXd g = Eigen::VectorXd::Zero(f.dimension());
      for (int k = 0; k < f.dimension(); ++k)
        g += A(i, k) * (Ainv.transpose() * f.component(k).gradient(u));
      return g;
    };
  }
  return AnalyticField(n, std::move(comps));
}

std::array<double, 3> orthogonal_invariance_residual(const Eigen::MatrixXd& A,
                                                     const Eigen::VectorXd& b,
                                                     const AnalyticField& f,
                                                     const Eigen::VectorXd& u) {
  const int n = f.dimension();
  if ((A.transpose() * A - Eigen::MatrixXd::Identity(n, n)).norm() > kOrthogonalityTol)
    throw std::invalid_argument("orthogonal_invariance_residual: A is not orthogonal");
  const AnalyticField pushed = pushforward_linear(A, b, f);
  const Eigen::VectorXd image = A * u + b;
  const Eigen::MatrixXd jac_here = f.jacobian(u);
  const Eigen::MatrixXd jac_there = pushed.jacobian(image);
  return {std::abs(jac_here.squaredNorm() - jac_there.squaredNorm()),
          std::abs(curl_from_jacobian(jac_here).norm_squared() -
                   curl_from_jacobian(jac_there).norm_squared()),
          std::abs(std::pow(div_from_jacobian(jac_here), 2) -
                   std::pow(div_from_jacobian(jac_there), 2))};
}

Eigen::MatrixXd rotation_from_direction(const Eigen::VectorXd& dir) {
  const int n = static_cast<int>(dir.size());
  const double norm = dir.norm();
  if (!(norm > 0.0))
    throw std::invalid_argument("rotation_from_direction: zero direction");
  Eigen::MatrixXd A(n, n);
  A.col(0) = dir / norm;
  int col = 1;
  for (int axis = 0; axis < n && col < n; ++axis) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, axis);
    for (int k = 0; k < col; ++k) v -= v.dot(A.col(k)) * A.col(k);
    const double vn = v.norm();
    if (vn > 1e-8) A.col(col++) = v / vn;
  }
  if (col != n)
    throw std::runtime_error("rotation_from_direction: basis completion failed");
  // positively oriented
  if (A.determinant() < 0.0) A.col(n - 1) *= -1.0;
  return A;
}

FlowMap::FlowMap(AnalyticField lambda, Eigen::VectorXd x0, double r)
    : lambda_(std::move(lambda)), x0_(std::move(x0)), r_(r), dim_(lambda_.dimension()) {
  if (x0_.size() != dim_)
    throw std::invalid_argument("FlowMap: base point dimension mismatch");
  if (!(r_ > 0.0)) throw std::invalid_argument("FlowMap: radius must be positive");
  const Eigen::VectorXd lam0 = lambda_.eval(x0_);
  if (!(lam0.norm() > 0.0))
    throw std::invalid_argument("FlowMap: lambda vanishes at the base point");
  rotation_ = rotation_from_direction(lam0);

  // probe points: box corners and center
  std::vector<Eigen::VectorXd> probes;
  probes.push_back(Eigen::VectorXd::Zero(dim_));
  for (int mask = 0; mask < (1 << dim_); ++mask) {
    Eigen::VectorXd p(dim_);
    for (int d = 0; d < dim_; ++d) p[d] = (mask >> d & 1) ? r_ : -r_;
    probes.push_back(p);
  }

  const double safety = (1.0 + kBoxMargin) * r_ * std::sqrt(double(dim_));
  double max_excursion = 0.0;
  const auto psi_with = [&](const Eigen::VectorXd& x, int steps) {
    Eigen::VectorXd y = initial_point(x);
    const double dt = x[0] / steps;
    for (int s = 0; s < steps; ++s) {
      const Eigen::VectorXd k1 = lambda_.eval(y);
      const Eigen::VectorXd k2 = lambda_.eval(y + 0.5 * dt * k1);
      const Eigen::VectorXd k3 = lambda_.eval(y + 0.5 * dt * k2);
      const Eigen::VectorXd k4 = lambda_.eval(y + dt * k3);
      y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      max_excursion = std::max(max_excursion, (y - x0_).lpNorm<Eigen::Infinity>());
    }
    return y;
  };

  steps_ = 8;
  while (true) {
    max_excursion = 0.0;
    double diff = 0.0;
    for (const auto& p : probes) {
      const Eigen::VectorXd coarse = psi_with(p, steps_);
      const Eigen::VectorXd fine = psi_with(p, 2 * steps_);
      diff = std::max(diff, (coarse - fine).norm());
    }
    if (max_excursion > safety) {
      const double admissible = r_ * safety / max_excursion;
      throw std::runtime_error(
          "FlowMap: flow exits the safety box; reduce the radius to about " +
          std::to_string(admissible));
    }
    if (diff < kStepCriterion) {
      steps_ *= 2;  // keep the finer step that met the criterion
      break;
    }
    if (steps_ >= kMaxSteps)
      throw std::runtime_error("FlowMap: step refinement did not converge");
    steps_ *= 2;
  }
}

Eigen::VectorXd FlowMap::initial_point(const Eigen::VectorXd& x) const {
  Eigen::VectorXd offset = x;
  offset[0] = 0.0;
  return x0_ + rotation_ * offset;
}

void FlowMap::integrate(double time, const Eigen::VectorXd& start,
                        Eigen::VectorXd* y_out, Eigen::MatrixXd* jac_out) const {
  // Reparametrized to unit time with the field scaled by `time`: the state
  // values match integrating lambda for `time` with the same step count,
  // and carrying the sensitivity ODEs with matched stages yields the exact
  // Jacobian of the numerical map (initial-offset matrix M and the
  // time-parameter column s), so downstream residuals see the true
  // integration error instead of the defining identity.
  Eigen::VectorXd y = start;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(dim_, dim_);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dim_);
  const bool with_jac = jac_out != nullptr;
  const double h = 1.0 / steps_;
  for (int step = 0; step < steps_; ++step) {
    const Eigen::VectorXd k1 = time * lambda_.eval(y);
    const Eigen::VectorXd y2 = y + 0.5 * h * k1;
    const Eigen::VectorXd k2 = time * lambda_.eval(y2);
    const Eigen::VectorXd y3 = y + 0.5 * h * k2;
    const Eigen::VectorXd k3 = time * lambda_.eval(y3);
    const Eigen::VectorXd y4 = y + h * k3;
    const Eigen::VectorXd k4 = time * lambda_.eval(y4);
    if (with_jac) {
      const Eigen::MatrixXd j1 = lambda_.jacobian(y);
      const Eigen::MatrixXd j2 = lambda_.jacobian(y2);
      const Eigen::MatrixXd j3 = lambda_.jacobian(y3);
      const Eigen::MatrixXd j4 = lambda_.jacobian(y4);
      // M' = time * grad lambda(y) M
      const Eigen::MatrixXd K1 = time * (j1 * M);
      const Eigen::MatrixXd K2 = time * (j2 * (M + 0.5 * h * K1));
      const Eigen::MatrixXd K3 = time * (j3 * (M + 0.5 * h * K2));
      const Eigen::MatrixXd K4 = time * (j4 * (M + h * K3));
      // s' = time * grad lambda(y) s + lambda(y)
      const Eigen::VectorXd s1 = time * (j1 * s) + lambda_.eval(y);
      const Eigen::VectorXd s2 = time * (j2 * (s + 0.5 * h * s1)) + lambda_.eval(y2);
      const Eigen::VectorXd s3 = time * (j3 * (s + 0.5 * h * s2)) + lambda_.eval(y3);
      const Eigen::VectorXd s4 = time * (j4 * (s + h * s3)) + lambda_.eval(y4);
      M += h / 6.0 * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
      s += h / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
    }
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  *y_out = y;
  if (with_jac) {
    jac_out->resize(dim_, dim_);
    jac_out->col(0) = s;
    for (int j = 1; j < dim_; ++j) jac_out->col(j) = M * rotation_.col(j);
  }
}

Eigen::VectorXd FlowMap::forward(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  integrate(x[0], initial_point(x), &y, nullptr);
  return y;
}

Eigen::MatrixXd FlowMap::forward_jacobian(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  Eigen::MatrixXd jac;
  integrate(x[0], initial_point(x), &y, &jac);
  return jac;
}

Eigen::VectorXd FlowMap::inverse(const Eigen::VectorXd& y) const {
  SmoothMap m;
  m.dim = dim_;
  m.forward = [this](const Eigen::VectorXd& x) { return forward(x); };
  m.jacobian = [this](const Eigen::VectorXd& x) { return forward_jacobian(x); };
  return invert_map(m, y, rotation_.transpose() * (y - x0_));
}

Eigen::MatrixXd FlowMap::inverse_jacobian_from(const Eigen::VectorXd& x) const {
  return forward_jacobian(x).inverse();
}

Eigen::VectorXd FlowMap::pushforward_lambda(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  Eigen::MatrixXd jac;
  integrate(x[0], initial_point(x), &y, &jac);
  return jac.partialPivLu().solve(lambda_.eval(y));
}

SmoothMap FlowMap::rectifier() const {
  SmoothMap m;
  m.dim = dim_;
  m.forward = [fm = *this](const Eigen::VectorXd& y) { return fm.inverse(y); };
  m.jacobian = [fm = *this](const Eigen::VectorXd& y) {
    // grad Phi(y) = (grad Psi(Phi(y)))^-1
    return fm.forward_jacobian(fm.inverse(y)).inverse().eval();
  };
  m.inverse = [fm = *this](const Eigen::VectorXd& x) { return fm.forward(x); };
  return m;
}

FlowMap rectify_flow(const AnalyticField& lambda, const Eigen::VectorXd& x0,
                     double r) {
  return FlowMap(lambda, x0, r);
}

double rectification_residual(const FlowMap& fm, const AnalyticField& lambda,
                              const std::vector<Eigen::VectorXd>& pts) {
  double worst = 0.0;
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(fm.dimension());
  e1[0] = 1.0;
  for (const auto& p : pts) {
    if (p.lpNorm<Eigen::Infinity>() > fm.radius() * (1.0 + 1e-12))
      throw std::invalid_argument("rectification_residual: point outside the validity box");
    const Eigen::VectorXd y = fm.forward(p);
    const Eigen::MatrixXd jac = fm.forward_jacobian(p);
    const Eigen::VectorXd pushed = jac.partialPivLu().solve(lambda.eval(y));
    worst = std::max(worst, (pushed - e1).norm());
  }
  return worst;
}

}  // namespace gaffney
