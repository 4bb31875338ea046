#include <doctest.h>

#include <cmath>
#include <random>

#include "gaffney/counterexamples.hpp"
#include "gaffney/pushforward.hpp"
#include "gaffney/registry.hpp"

using namespace gaffney;

namespace {

Eigen::Matrix2d rotation2(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

SmoothMap parabola_map() {
  // Phi(x) = (x1, x2 + x1^2/2) with exact inverse and Jacobian
  SmoothMap m;
  m.dim = 2;
  m.forward = [](const Eigen::VectorXd& x) {
    return Eigen::Vector2d(x[0], x[1] + 0.5 * x[0] * x[0]).eval();
  };
  m.jacobian = [](const Eigen::VectorXd& x) {
    Eigen::Matrix2d j;
    j << 1, 0, x[0], 1;
    return Eigen::MatrixXd(j);
  };
  m.inverse = [](const Eigen::VectorXd& y) {
    return Eigen::Vector2d(y[0], y[1] - 0.5 * y[0] * y[0]).eval();
  };
  return m;
}

AnalyticField shear_field() {
  // lambda = (1, x1)
  return AnalyticField(
      2, {ScalarFunction{[](const Eigen::VectorXd&) { return 1.0; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 0.0).eval();
                         }},
          ScalarFunction{[](const Eigen::VectorXd& x) { return x[0]; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(1.0, 0.0).eval();
                         }}});
}

AnalyticField smooth_lambda() {
  // lambda = (1 + x2^2/10, sin(x1)/5)
  return AnalyticField(
      2, {ScalarFunction{[](const Eigen::VectorXd& x) {
                           return 1.0 + x[1] * x[1] / 10.0;
                         },
                         [](const Eigen::VectorXd& x) {
                           return Eigen::Vector2d(0.0, x[1] / 5.0).eval();
                         }},
          ScalarFunction{[](const Eigen::VectorXd& x) { return std::sin(x[0]) / 5.0; },
                         [](const Eigen::VectorXd& x) {
                           return Eigen::Vector2d(std::cos(x[0]) / 5.0, 0.0).eval();
                         }}});
}

}  // namespace

TEST_CASE("pushforward through elementary maps") {
  const AnalyticField f = lookup_field("poly");
  SmoothMap identity;
  identity.dim = 2;
  identity.forward = [](const Eigen::VectorXd& x) { return x; };
  identity.jacobian = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Identity(x.size(), x.size()).eval();
  };
  identity.inverse = [](const Eigen::VectorXd& x) { return x; };
  const Eigen::VectorXd y = Eigen::Vector2d(0.4, 0.7);
  CHECK((pushforward(identity, f, y) - f.eval(y)).norm() <= 1e-14);

  // rotation by pi/2 sends the constant (1, 0) to (0, 1)
  SmoothMap rot;
  rot.dim = 2;
  const Eigen::Matrix2d R = rotation2(M_PI / 2);
  rot.forward = [R](const Eigen::VectorXd& x) { return (R * x).eval(); };
  rot.jacobian = [R](const Eigen::VectorXd&) { return Eigen::MatrixXd(R); };
  rot.inverse = [R](const Eigen::VectorXd& y_) {
    return (R.transpose() * y_).eval();
  };
  const Eigen::VectorXd pushed = pushforward(rot, lookup_field("constant"), y);
  CHECK(pushed[0] == doctest::Approx(0.0));
  CHECK(pushed[1] == doctest::Approx(1.0));
}

TEST_CASE("pushforward composes") {
  const SmoothMap phi = parabola_map();
  SmoothMap psi;  // an affine map
  psi.dim = 2;
  const Eigen::Matrix2d R = rotation2(0.3);
  const Eigen::Vector2d shift(0.1, -0.2);
  psi.forward = [R, shift](const Eigen::VectorXd& x) { return (R * x + shift).eval(); };
  psi.jacobian = [R](const Eigen::VectorXd&) { return Eigen::MatrixXd(R); };
  psi.inverse = [R, shift](const Eigen::VectorXd& y) {
    return (R.transpose() * (y - shift)).eval();
  };

  SmoothMap composed;
  composed.dim = 2;
  composed.forward = [&](const Eigen::VectorXd& x) { return phi.forward(psi.forward(x)); };
  composed.jacobian = [&](const Eigen::VectorXd& x) {
    return (phi.jacobian(psi.forward(x)) * psi.jacobian(x)).eval();
  };
  composed.inverse = [&](const Eigen::VectorXd& y) { return psi.inverse(phi.inverse(y)); };

  const AnalyticField f = lookup_field("trig");
  const auto f_fn = [&f](const Eigen::VectorXd& x) { return f.eval(x); };
  const auto inner = [&](const Eigen::VectorXd& x) { return pushforward(psi, f_fn, x); };

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd y = Eigen::Vector2d(unit(rng), unit(rng));
    const Eigen::VectorXd lhs = pushforward(composed, f, y);
    const Eigen::VectorXd rhs = pushforward(phi, inner, y);
    CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));
  }
}

TEST_CASE("newton inversion fallback") {
  SmoothMap m = parabola_map();
  m.inverse = nullptr;  // force Newton with the exact Jacobian
  const Eigen::VectorXd y = Eigen::Vector2d(0.8, 0.3);
  const Eigen::VectorXd x = invert_map(m, y, y);
  CHECK((m.forward(x) - y).norm() <= 1e-10 * (1.0 + y.norm()));

  m.jacobian = nullptr;  // finite-difference Jacobian path
  const Eigen::VectorXd x2 = invert_map(m, y, y);
  CHECK((m.forward(x2) - y).norm() <= 1e-10 * (1.0 + y.norm()));

  SmoothMap degenerate;
  degenerate.dim = 2;
  degenerate.forward = [](const Eigen::VectorXd& x) {
    return Eigen::Vector2d(x[0] * x[0], x[1]).eval();  // not invertible at 0
  };
  CHECK_THROWS_AS(invert_map(degenerate, Eigen::Vector2d(-1.0, 0.0),
                             Eigen::Vector2d(0.0, 0.0)),
                  std::runtime_error);
}

TEST_CASE("orthogonal invariance of the three energies") {
  const AnalyticField f2 = lookup_field("swap");
  const Eigen::VectorXd u = Eigen::Vector2d(0.3, 0.9);

  const auto zero_res = orthogonal_invariance_residual(
      Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(4.0, -2.0), f2, u);
  for (double r : zero_res) CHECK(r <= 1e-12);

  const auto rot_res = orthogonal_invariance_residual(
      Eigen::MatrixXd(rotation2(M_PI / 2)), Eigen::Vector2d(0.0, 0.0), f2, u);
  for (double r : rot_res) CHECK(r <= 1e-12);

  // n = 3: even permutation matrix on the scalar-lambda counterexample field
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(3, 3);
  P(0, 1) = 1.0;
  P(1, 2) = 1.0;
  P(2, 0) = 1.0;
  const auto perm_res = orthogonal_invariance_residual(
      P, Eigen::Vector3d::Zero(), scalar_lambda_family(2),
      Eigen::Vector3d(0.2, 0.5, 0.8));
  for (double r : perm_res) CHECK(r <= 1e-12);

  Eigen::MatrixXd not_orth = Eigen::MatrixXd::Identity(2, 2) * 2.0;
  CHECK_THROWS_AS(
      orthogonal_invariance_residual(not_orth, Eigen::Vector2d::Zero(), f2, u),
      std::invalid_argument);
}

TEST_CASE("rotation completion is special orthogonal") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd dir(n);
      for (int i = 0; i < n; ++i) dir[i] = gauss(rng);
      const Eigen::MatrixXd A = rotation_from_direction(dir);
      CHECK((A.transpose() * A - Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-12);
      CHECK(A.determinant() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK((A.col(0) - dir / dir.norm()).norm() <= 1e-12);
    }
  }
}

TEST_CASE("rectification of constant fields is exact") {
  const FlowMap fm = rectify_flow(lookup_field("constant"), Eigen::Vector2d(0, 0), 0.5);
  const Eigen::VectorXd x = Eigen::Vector2d(0.25, -0.4);
  CHECK((fm.forward(x) - x).norm() <= 1e-14);  // Psi is the identity

  std::vector<Eigen::VectorXd> pts = {Eigen::Vector2d(0.5, 0.5),
                                      Eigen::Vector2d(-0.5, 0.2),
                                      Eigen::Vector2d(0.0, 0.0)};
  CHECK(rectification_residual(fm, lookup_field("constant"), pts) <= 1e-12);

  // lambda = (cos a, sin a): Phi is the rotation by -a
  const double a = 0.7;
  AnalyticField tilted(
      2, {ScalarFunction{[a](const Eigen::VectorXd&) { return std::cos(a); },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 0.0).eval();
                         }},
          ScalarFunction{[a](const Eigen::VectorXd&) { return std::sin(a); },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 0.0).eval();
                         }}});
  const FlowMap tilted_fm = rectify_flow(tilted, Eigen::Vector2d(0, 0), 0.5);
  const Eigen::Vector2d y(0.3, -0.1);
  CHECK((tilted_fm.inverse(y) - (rotation2(-a) * y)).norm() <= 1e-10);
  CHECK(rectification_residual(tilted_fm, tilted, pts) <= 1e-12);
}

TEST_CASE("rectification of the shear flow matches the closed form") {
  const AnalyticField lam = shear_field();
  const FlowMap fm = rectify_flow(lam, Eigen::Vector2d(0, 0), 0.5);
  for (double x1 : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
    for (double x2 : {-0.5, 0.0, 0.5}) {
      const Eigen::Vector2d x(x1, x2);
      const Eigen::Vector2d expected(x1, x2 + 0.5 * x1 * x1);
      CHECK((fm.forward(x) - expected).norm() <= 1e-9);
      // Phi inverts it: Phi(y) = (y1, y2 - y1^2/2)
      const Eigen::Vector2d y(x1, x2);
      const Eigen::Vector2d phi_expected(x1, x2 - 0.5 * x1 * x1);
      CHECK((fm.inverse(y) - phi_expected).norm() <= 1e-9);
    }
  }
  std::vector<Eigen::VectorXd> pts;
  for (double x1 : {-0.5, 0.0, 0.5})
    for (double x2 : {-0.5, 0.0, 0.5}) pts.push_back(Eigen::Vector2d(x1, x2));
  CHECK(rectification_residual(fm, lam, pts) <= 1e-9);
}

TEST_CASE("rectification contracts for a smooth nonconstant field") {
  const AnalyticField lam = smooth_lambda();
  const FlowMap fm = rectify_flow(lam, Eigen::Vector2d(0, 0), 0.3);
  std::vector<Eigen::VectorXd> pts;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      pts.push_back(Eigen::Vector2d(0.3 * i / 2.0, 0.3 * j / 2.0));
  CHECK(rectification_residual(fm, lam, pts) <= 1e-7);

  // grad Phi at the base point is special orthogonal
  const Eigen::MatrixXd grad_phi = fm.inverse_jacobian_from(Eigen::Vector2d(0, 0));
  CHECK((grad_phi.transpose() * grad_phi - Eigen::MatrixXd::Identity(2, 2)).norm() <=
        1e-8);
  CHECK(grad_phi.determinant() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("cross products vanish after pushforward when they vanish before") {
  const AnalyticField lam = smooth_lambda();
  const FlowMap fm = rectify_flow(lam, Eigen::Vector2d(0, 0), 0.3);
  // beta = mu(x) alpha(x) is collinear with alpha everywhere
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(-0.3, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Vector2d x(unit(rng), unit(rng));
    const Eigen::MatrixXd jac = fm.forward_jacobian(x);
    const Eigen::VectorXd y = fm.forward(x);
    const double mu = 0.5 + 0.1 * y[0];
    const Eigen::VectorXd alpha = lam.eval(y);
    const Eigen::VectorXd beta = mu * alpha;
    const Eigen::VectorXd pa = jac.partialPivLu().solve(alpha);
    const Eigen::VectorXd pb = jac.partialPivLu().solve(beta);
    CHECK(cross(pa, pb).comp.norm() <= 1e-8 * pa.norm() * pb.norm());
  }
}

TEST_CASE("flow construction guards") {
  AnalyticField zero(
      2, {ScalarFunction{[](const Eigen::VectorXd&) { return 0.0; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 0.0).eval();
                         }},
          ScalarFunction{[](const Eigen::VectorXd&) { return 0.0; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 0.0).eval();
                         }}});
  CHECK_THROWS_AS(rectify_flow(zero, Eigen::Vector2d(0, 0), 0.5),
                  std::invalid_argument);

  AnalyticField fast(
      2, {ScalarFunction{[](const Eigen::VectorXd&) { return 100.0; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 0.0).eval();
                         }},
          ScalarFunction{[](const Eigen::VectorXd&) { return 0.0; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 0.0).eval();
                         }}});
  CHECK_THROWS_WITH_AS(rectify_flow(fast, Eigen::Vector2d(0, 0), 0.5),
                       doctest::Contains("radius"), std::runtime_error);
}

TEST_CASE("rectifier as a smooth map") {
  const AnalyticField lam = shear_field();
  const FlowMap fm = rectify_flow(lam, Eigen::Vector2d(0, 0), 0.5);
  const SmoothMap phi = fm.rectifier();
  const Eigen::VectorXd x = Eigen::Vector2d(0.2, 0.1);
  const Eigen::VectorXd pushed = pushforward(phi, lam, x);
  CHECK(pushed[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(pushed[1]) <= 1e-9);
}
