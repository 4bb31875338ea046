#include "gaffney/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "gaffney/calculus.hpp"
#include "gaffney/counterexamples.hpp"
#include "gaffney/mesh.hpp"
#include "gaffney/pushforward.hpp"
#include "gaffney/quadratic_forms.hpp"
#include "gaffney/registry.hpp"

namespace gaffney {

namespace {

std::vector<Eigen::VectorXd> sample_points(int dim, int count,
                                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts(count);
  for (auto& p : pts) {
    p.resize(dim);
    for (int d = 0; d < dim; ++d) p[d] = unit(rng);
  }
  return pts;
}

ScalarFunction random_polynomial(std::mt19937_64& rng) {
  // degree-2 polynomial in (x1, x2) with coefficients in [-1, 1]
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::array<double, 6> c;
  for (auto& v : c) v = coef(rng);
  return {[c](const Eigen::VectorXd& x) {
            return c[0] + c[1] * x[0] + c[2] * x[1] + c[3] * x[0] * x[0] +
                   c[4] * x[0] * x[1] + c[5] * x[1] * x[1];
          },
          [c](const Eigen::VectorXd& x) {
            return Eigen::Vector2d(c[1] + 2.0 * c[3] * x[0] + c[4] * x[1],
                                   c[2] + c[4] * x[0] + 2.0 * c[5] * x[1])
                .eval();
          }};
}

Eigen::MatrixXd random_orthogonal(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    Eigen::MatrixXd raw(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) raw(i, j) = gauss(rng);
    Eigen::MatrixXd q(dim, dim);
    bool ok = true;
    for (int j = 0; j < dim && ok; ++j) {
      Eigen::VectorXd v = raw.col(j);
      for (int k = 0; k < j; ++k) v -= v.dot(q.col(k)) * q.col(k);
      const double n = v.norm();
      if (n < 1e-6) ok = false;
      else q.col(j) = v / n;
    }
    if (ok) return q;
  }
}

Eigen::VectorXd random_dofs(int size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd u(size);
  for (int i = 0; i < size; ++i) u[i] = unit(rng);
  return u;
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const auto& s : suites)
    if (!s.pass) return false;
  return true;
}

VerifyReport run_verification(const std::vector<std::string>& field_names,
                              std::uint64_t seed) {
  VerifyReport report;
  std::mt19937_64 rng(seed);

  // 1. coded partials vs central differences, per field
  {
    SuiteResult s;
    s.name = "partial-consistency";
    s.threshold = 1e-6;
    for (const auto& name : field_names) {
      const AnalyticField f = lookup_field(name);
      const auto pts = sample_points(f.dimension(), 100, rng);
      const double dev = max_partial_deviation(f, pts);
      if (dev > s.max_residual) {
        s.max_residual = dev;
        s.detail = name;
      }
    }
    s.pass = s.max_residual <= s.threshold;
    report.suites.push_back(s);
  }

  // 2. pointwise algebraic identity, analytic fields
  {
    SuiteResult s;
    s.name = "pointwise-identity";
    s.threshold = 1e-12;
    for (const auto& name : field_names) {
      const AnalyticField f = lookup_field(name);
      for (const auto& x : sample_points(f.dimension(), 100, rng)) {
        const double scale = 1.0 + f.jacobian(x).squaredNorm();
        const double res = std::abs(pointwise_identity_residual(f, x)) / scale;
        if (res > s.max_residual) {
          s.max_residual = res;
          s.detail = name;
        }
      }
    }
    s.pass = s.max_residual <= s.threshold;
    report.suites.push_back(s);
  }

  // 3. pointwise identity for nodal fields at barycenters
  {
    SuiteResult s;
    s.name = "pointwise-identity-nodal";
    s.threshold = 1e-12;
    const Mesh m = generate_structured_square(8);
    for (int trial = 0; trial < 10; ++trial) {
      const FemField f(m, random_dofs(m.dof_count(), rng));
      for (int t = 0; t < m.triangle_count(); ++t) {
        const Eigen::Matrix2d jac = f.jacobian_in(t);
        const double scale = 1.0 + jac.squaredNorm();
        const double res =
            std::abs(identity_residual_from_jacobian(jac)) / scale;
        s.max_residual = std::max(s.max_residual, res);
      }
    }
    s.pass = s.max_residual <= s.threshold;
    report.suites.push_back(s);
  }

  // 4. product rule of the tangential derivative on random edges
  {
    SuiteResult s;
    s.name = "product-rule";
    s.threshold = 1e-12;
    const Mesh m = generate_structured_square(4);
    std::uniform_int_distribution<int> edge_pick(
        0, static_cast<int>(m.boundary_edges.size()) - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const Edge& e = m.boundary_edges[edge_pick(rng)];
      const ScalarFunction f = random_polynomial(rng);
      const ScalarFunction g = random_polynomial(rng);
      const ScalarFunction fg{
          [f, g](const Eigen::VectorXd& x) { return f.value(x) * g.value(x); },
          [f, g](const Eigen::VectorXd& x) {
            return (f.gradient(x) * g.value(x) + f.value(x) * g.gradient(x)).eval();
          }};
      const double t = unit(rng);
      const Eigen::Vector2d x =
          (1.0 - t) * m.vertices[e.v[0]] + t * m.vertices[e.v[1]];
      const double lhs = tangential_derivative(fg, m, e, 1, 2, x);
      const double rhs = tangential_derivative(f, m, e, 1, 2, x) * g.value(x) +
                         f.value(x) * tangential_derivative(g, m, e, 1, 2, x);
      const double res = std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
      s.max_residual = std::max(s.max_residual, res);
    }
    s.pass = s.max_residual <= s.threshold;
    report.suites.push_back(s);
  }

  // 5. integration-by-parts identity for random nodal fields
  {
    SuiteResult s;
    s.name = "ibp-identity";
    s.threshold = 1e-11;
    for (const auto& domain : {std::string("square"), std::string("lshape")}) {
      const Mesh m = make_domain(domain, domain == "square" ? 4 : 2);
      const QuadraticForms q = assemble(m);
      for (int trial = 0; trial < 25; ++trial) {
        const FemField f(m, random_dofs(m.dof_count(), rng));
        const double scale = 1.0 + f.dofs().dot(q.A * f.dofs());
        s.max_residual =
            std::max(s.max_residual, ibp_identity_residual(m, f) / scale);
      }
    }
    s.pass = s.max_residual <= s.threshold;
    report.suites.push_back(s);
  }

  // 6. orthogonal invariance of the three pointwise energies
  {
    SuiteResult s;
    s.name = "orthogonal-invariance";
    s.threshold = 1e-10;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& name : field_names) {
      const AnalyticField f = lookup_field(name);
      for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd A = random_orthogonal(f.dimension(), rng);
        Eigen::VectorXd b(f.dimension());
        for (int d = 0; d < f.dimension(); ++d) b[d] = gauss(rng);
        const Eigen::VectorXd u = sample_points(f.dimension(), 1, rng)[0];
        const auto res = orthogonal_invariance_residual(A, b, f, u);
        const double scale = 1.0 + f.jacobian(u).squaredNorm();
        for (const double r : res)
          s.max_residual = std::max(s.max_residual, r / scale);
      }
    }
    s.pass = s.max_residual <= s.threshold;
    report.suites.push_back(s);
  }

  // 7. flow rectification against its contracts
  {
    SuiteResult s;
    s.name = "rectification";
    s.threshold = 1.0;  // pass/fail decided per case below
    double worst_margin = 0.0;
    const auto run_case = [&](const AnalyticField& lam, double r, double tol) {
      const FlowMap fm = rectify_flow(lam, Eigen::Vector2d(0.0, 0.0), r);
      std::vector<Eigen::VectorXd> pts;
      for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j)
          pts.push_back(Eigen::Vector2d(r * i / 2.0, r * j / 2.0));
      const double res = rectification_residual(fm, lam, pts);
      worst_margin = std::max(worst_margin, res / tol);
    };
    run_case(lookup_field("constant"), 0.5, 1e-12);
    {
      // lambda = (1, x1)
      AnalyticField shear(
          2, {ScalarFunction{[](const Eigen::VectorXd&) { return 1.0; },
                             [](const Eigen::VectorXd&) {
                               return Eigen::Vector2d(0.0, 0.0).eval();
                             }},
              ScalarFunction{[](const Eigen::VectorXd& x) { return x[0]; },
                             [](const Eigen::VectorXd&) {
                               return Eigen::Vector2d(1.0, 0.0).eval();
                             }}});
      run_case(shear, 0.5, 1e-9);
    }
    {
      // smooth nonconstant case
      AnalyticField smooth(
          2, {ScalarFunction{[](const Eigen::VectorXd& x) {
                               return 1.0 + x[1] * x[1] / 10.0;
                             },
                             [](const Eigen::VectorXd& x) {
                               return Eigen::Vector2d(0.0, x[1] / 5.0).eval();
                             }},
              ScalarFunction{[](const Eigen::VectorXd& x) {
                               return std::sin(x[0]) / 5.0;
                             },
                             [](const Eigen::VectorXd& x) {
                               return Eigen::Vector2d(std::cos(x[0]) / 5.0, 0.0)
                                   .eval();
                             }}});
      run_case(smooth, 0.3, 1e-7);
    }
    s.max_residual = worst_margin;  // residual / tolerance, must stay <= 1
    s.pass = worst_margin <= 1.0;
    s.detail = "residual scaled by the per-case tolerance";
    report.suites.push_back(s);
  }

  return report;
}

}  // namespace gaffney
