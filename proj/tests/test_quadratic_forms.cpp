#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gaffney/boundary.hpp"
#include "gaffney/quadratic_forms.hpp"
#include "gaffney/registry.hpp"

using namespace gaffney;

namespace {

Mesh reference_triangle() {
  Mesh m;
  m.vertices = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  m.triangles = {{0, 1, 2}};
  m.segment_count = 3;
  Edge e1, e2, e3;
  e1.v = {0, 1};
  e1.tag = 1;
  e2.v = {1, 2};
  e2.tag = 2;
  e3.v = {2, 0};
  e3.tag = 3;
  m.boundary_edges = {e1, e2, e3};
  recompute_edge_frames(m);
  return m;
}

Eigen::VectorXd random_dofs(int size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd u(size);
  for (int i = 0; i < size; ++i) u[i] = unit(rng);
  return u;
}

}  // namespace

TEST_CASE("reference triangle element blocks") {
  const Mesh m = reference_triangle();
  REQUIRE(validate(m).empty());
  const QuadraticForms q = assemble(m);
  const Eigen::MatrixXd A = Eigen::MatrixXd(q.A);
  const Eigen::MatrixXd M = Eigen::MatrixXd(q.M);

  Eigen::Matrix3d stiffness;
  stiffness << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  stiffness *= 0.5;
  Eigen::Matrix3d mass;
  mass << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  mass /= 24.0;
  for (int c = 0; c < 2; ++c) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        CHECK(A(2 * a + c, 2 * b + c) == doctest::Approx(stiffness(a, b)).epsilon(1e-14));
        CHECK(M(2 * a + c, 2 * b + c) == doctest::Approx(mass(a, b)).epsilon(1e-14));
        // components do not couple in A or M
        CHECK(A(2 * a + c, 2 * b + (1 - c)) == doctest::Approx(0.0));
        CHECK(M(2 * a + c, 2 * b + (1 - c)) == doctest::Approx(0.0));
      }
    }
  }
}

TEST_CASE("energies of the affine test fields on the unit square") {
  const Mesh m = generate_structured_square(4);
  const QuadraticForms q = assemble(m);

  const FemField lin = interpolate(lookup_field("linear"), m);
  const Eigen::VectorXd& u = lin.dofs();
  CHECK(u.dot(q.A * u) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(u.dot(q.D * u) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(u.dot(q.M * u) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  // boundary mass of (x1, x2): 1/3 + 4/3 + 4/3 + 1/3 over the four sides
  CHECK(u.dot(q.T * u) == doctest::Approx(10.0 / 3.0).epsilon(1e-13));

  const GaffneyQuotient lin_q = quotient(q, u);
  CHECK(lin_q.ratio == doctest::Approx(3.0 / 7.0).epsilon(1e-13));

  const FemField swap = interpolate(lookup_field("swap"), m);
  const GaffneyQuotient swap_q = quotient(q, swap.dofs());
  CHECK(swap_q.curl_div_energy == doctest::Approx(0.0));
  CHECK(swap_q.ratio == doctest::Approx(3.0).epsilon(1e-13));

  const FemField cst = interpolate(lookup_field("constant"), m);
  CHECK(quotient(q, cst.dofs()).ratio == doctest::Approx(0.0));

  CHECK_THROWS_AS(quotient(q, Eigen::VectorXd::Zero(m.dof_count())),
                  std::invalid_argument);
}

TEST_CASE("matrix structure: symmetry and definiteness") {
  const Mesh m = generate_structured_square(3);
  const QuadraticForms q = assemble(m);
  const auto check_sym = [](const Eigen::SparseMatrix<double>& s) {
    const Eigen::MatrixXd d = Eigen::MatrixXd(s);
    CHECK((d - d.transpose()).norm() <= 1e-12 * (1.0 + d.norm()));
  };
  check_sym(q.A);
  check_sym(q.D);
  check_sym(q.M);
  check_sym(q.T);

  const auto min_eig = [](const Eigen::SparseMatrix<double>& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(s)};
    return es.eigenvalues().minCoeff();
  };
  CHECK(min_eig(q.M) > 0.0);
  CHECK(min_eig(q.A) >= -1e-12 * Eigen::MatrixXd(q.A).norm());
  CHECK(min_eig(q.D) >= -1e-12 * Eigen::MatrixXd(q.D).norm());
  CHECK(min_eig(q.T) >= -1e-12 * Eigen::MatrixXd(q.T).norm());

  // null space of A: the two constant fields
  Eigen::VectorXd cx = Eigen::VectorXd::Zero(m.dof_count());
  Eigen::VectorXd cy = Eigen::VectorXd::Zero(m.dof_count());
  for (int v = 0; v < m.vertex_count(); ++v) {
    cx[2 * v] = 1.0;
    cy[2 * v + 1] = 1.0;
  }
  CHECK((q.A * cx).norm() <= 1e-12);
  CHECK((q.A * cy).norm() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(q.A)};
  int null_count = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    null_count += std::abs(es.eigenvalues()[i]) <= 1e-12;
  CHECK(null_count == 2);
}

TEST_CASE("integration by parts identity") {
  const Mesh m = generate_structured_square(4);

  // for (x1, x2) both sides equal 1
  const FemField lin = interpolate(lookup_field("linear"), m);
  double interior = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const Eigen::Matrix2d jac = lin.jacobian_in(t);
    interior += m.triangle_area(t) * (jac(0, 0) * jac(1, 1) - jac(1, 0) * jac(0, 1));
  }
  CHECK(interior == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ibp_identity_residual(m, lin) <= 1e-13);

  const FemField cst = interpolate(lookup_field("constant"), m);
  CHECK(ibp_identity_residual(m, cst) == doctest::Approx(0.0));

  std::mt19937_64 rng(53);
  for (const auto& domain : {std::string("square"), std::string("lshape"),
                             std::string("hexagon")}) {
    const Mesh mesh = make_domain(domain, domain == "square" ? 4 : 2);
    const QuadraticForms q = assemble(mesh);
    for (int trial = 0; trial < 50; ++trial) {
      const FemField f(mesh, random_dofs(mesh.dof_count(), rng));
      const double scale = 1.0 + f.dofs().dot(q.A * f.dofs());
      CHECK(ibp_identity_residual(mesh, f) <= 1e-11 * scale);
    }
  }
}

TEST_CASE("constant-lambda equality for admissible nodal fields") {
  const Mesh m = generate_structured_square(8);
  const QuadraticForms q = assemble(m);
  const auto cs = node_constraints(
      BoundarySpec::uniform(m, BcKind::CrossLambda, LambdaSpec::expression("1,0")), m);
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd u = random_dofs(m.dof_count(), rng);
    for (const auto& nc : cs)
      if (nc.dim == 1) u[2 * nc.vertex + 1] = 0.0;  // second component on the boundary
    const double grad = u.dot(q.A * u);
    const double curl_div = u.dot(q.D * u);
    CHECK(std::abs(grad - curl_div) <= 1e-11 * grad);
  }
}

TEST_CASE("assembly reports degenerate triangles") {
  Mesh m = generate_structured_square(1);
  m.vertices[3] = m.vertices[0];  // collapse one triangle
  CHECK_THROWS_WITH_AS(assemble(m), doctest::Contains("triangle"), std::runtime_error);
}

TEST_CASE("coo export format") {
  Eigen::SparseMatrix<double> s(2, 2);
  std::vector<Eigen::Triplet<double>> t = {{1, 0, 0.5}, {0, 0, 1.0 / 3.0}};
  s.setFromTriplets(t.begin(), t.end());
  std::ostringstream os;
  write_coo(os, s);
  CHECK(os.str() == "0 0 0.33333333333333331\n1 0 0.5\n");
}
