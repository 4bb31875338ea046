#include <doctest.h>

#include <cmath>

#include "gaffney/boundary.hpp"
#include "gaffney/calculus.hpp"
#include "gaffney/counterexamples.hpp"
#include "gaffney/expr.hpp"

using namespace gaffney;

namespace {

const Edge* edge_with_tag(const Mesh& m, int tag) {
  for (const auto& e : m.boundary_edges)
    if (e.tag == tag) return &e;
  return nullptr;
}

const NodeConstraint* constraint_at(const std::vector<NodeConstraint>& cs,
                                    const Mesh& m, const Eigen::Vector2d& p) {
  for (const auto& nc : cs)
    if ((m.vertices[nc.vertex] - p).norm() < 1e-12) return &nc;
  return nullptr;
}

}  // namespace

TEST_CASE("expression sublanguage") {
  const Expr e = Expr::parse("exp(2*x1)*cos(x2) - 1/(1+x1)");
  const double x1 = 0.3, x2 = 0.7;
  CHECK(e.eval(x1, x2) ==
        doctest::Approx(std::exp(2 * x1) * std::cos(x2) - 1.0 / (1.0 + x1)));

  // symbolic derivative vs central difference
  const Expr d1 = e.derivative(1);
  const double h = 1e-6;
  const double fd = (e.eval(x1 + h, x2) - e.eval(x1 - h, x2)) / (2 * h);
  CHECK(d1.eval(x1, x2) == doctest::Approx(fd).epsilon(1e-8));

  const auto pair = parse_vector_expr("sin(x1), (1+x2)*2");
  CHECK(pair[0].eval(0.5, 0.0) == doctest::Approx(std::sin(0.5)));
  CHECK(pair[1].eval(0.0, 0.5) == doctest::Approx(3.0));

  CHECK_THROWS_AS(Expr::parse("x3 + 1"), std::invalid_argument);
  CHECK_THROWS_AS(Expr::parse("cos(x1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_vector_expr("1"), std::invalid_argument);
}

TEST_CASE("lambda validation per segment") {
  const Mesh m = generate_structured_square(2);

  const BoundarySpec const_spec =
      BoundarySpec::uniform(m, BcKind::CrossLambda, LambdaSpec::expression("1,0"));
  for (const auto& row : validate_lambda(const_spec, m).rows) {
    CHECK(row.min_abs_lambda == doctest::Approx(1.0));
    CHECK_FALSE(row.flagged);
  }

  const BoundarySpec nu_spec =
      BoundarySpec::uniform(m, BcKind::CrossLambda, LambdaSpec::nu());
  for (const auto& row : validate_lambda(nu_spec, m).rows)
    CHECK(row.min_abs_lambda == doctest::Approx(1.0));

  const BoundarySpec vanishing =
      BoundarySpec::uniform(m, BcKind::CrossLambda, LambdaSpec::expression("x1-0.5,0"));
  const LambdaReport report = validate_lambda(vanishing, m);
  CHECK_FALSE(report.ok());
  bool bottom_flagged = false;
  for (const auto& row : report.rows)
    if (row.tag == 1) bottom_flagged = row.flagged;
  CHECK(bottom_flagged);
}

TEST_CASE("node constraints: constant lambda merges at corners") {
  const Mesh m = generate_structured_square(2);
  const BoundarySpec spec =
      BoundarySpec::uniform(m, BcKind::CrossLambda, LambdaSpec::expression("1,0"));
  const auto cs = node_constraints(spec, m);
  int boundary_nodes = 0;
  for (const auto& nc : cs) {
    const Eigen::Vector2d p = m.vertices[nc.vertex];
    const bool on_boundary = p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
    if (on_boundary) {
      ++boundary_nodes;
      CHECK(nc.dim == 1);
      CHECK(std::abs(nc.basis[0].x()) == doctest::Approx(1.0));
      CHECK(nc.basis[0].y() == doctest::Approx(0.0));
    } else {
      CHECK(nc.dim == 2);
    }
  }
  CHECK(boundary_nodes == 8);
}

TEST_CASE("node constraints: classical conditions pin corners") {
  const Mesh m = generate_structured_square(2);

  const auto t0 = node_constraints(BoundarySpec::uniform(m, BcKind::Tangential0), m);
  const NodeConstraint* corner = constraint_at(t0, m, Eigen::Vector2d(1.0, 0.0));
  REQUIRE(corner != nullptr);
  CHECK(corner->dim == 0);  // det((0,-1)|(1,0)) = 1
  const NodeConstraint* side = constraint_at(t0, m, Eigen::Vector2d(0.5, 0.0));
  REQUIRE(side != nullptr);
  CHECK(side->dim == 1);
  CHECK(std::abs(side->basis[0].y()) == doctest::Approx(1.0));  // basis nu

  const auto n0 = node_constraints(BoundarySpec::uniform(m, BcKind::Normal0), m);
  const NodeConstraint* n_side = constraint_at(n0, m, Eigen::Vector2d(0.5, 0.0));
  REQUIRE(n_side != nullptr);
  CHECK(n_side->dim == 1);
  CHECK(std::abs(n_side->basis[0].x()) == doctest::Approx(1.0));  // basis tau
  for (const auto& p : {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0),
                        Eigen::Vector2d(1, 1), Eigen::Vector2d(0, 1)}) {
    const NodeConstraint* nc = constraint_at(n0, m, p);
    REQUIRE(nc != nullptr);
    CHECK(nc->dim == 0);
  }
}

TEST_CASE("free keeps the non-free constraint alone") {
  const Mesh m = generate_structured_square(1);
  BoundarySpec spec = BoundarySpec::uniform(m, BcKind::Free);
  spec.segments[1] = {BcKind::Tangential0, LambdaSpec()};
  const auto cs = node_constraints(spec, m);
  // both corners of the bottom edge keep the single direction nu = (0,-1)
  for (const auto& p : {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)}) {
    const NodeConstraint* nc = constraint_at(cs, m, p);
    REQUIRE(nc != nullptr);
    CHECK(nc->dim == 1);
    CHECK(std::abs(nc->basis[0].y()) == doctest::Approx(1.0));
  }
  for (const auto& p : {Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1)}) {
    const NodeConstraint* nc = constraint_at(cs, m, p);
    REQUIRE(nc != nullptr);
    CHECK(nc->dim == 2);
  }
}

TEST_CASE("nullspace basis dimensions and orthonormality") {
  const Mesh m1 = generate_structured_square(1);

  const auto free_cs = node_constraints(BoundarySpec::uniform(m1, BcKind::Free), m1);
  const NullspaceBasis zfree = nullspace_basis(free_cs, m1);
  CHECK(zfree.free_count == m1.dof_count());
  CHECK((Eigen::MatrixXd(zfree.Z) - Eigen::MatrixXd::Identity(8, 8)).norm() == 0.0);

  const auto cross_cs = node_constraints(
      BoundarySpec::uniform(m1, BcKind::CrossLambda, LambdaSpec::expression("1,0")), m1);
  CHECK(nullspace_basis(cross_cs, m1).free_count == 4);

  const auto t0_cs = node_constraints(BoundarySpec::uniform(m1, BcKind::Tangential0), m1);
  CHECK(nullspace_basis(t0_cs, m1).free_count == 0);

  const Mesh m = generate_structured_square(3);
  const auto cs = node_constraints(
      BoundarySpec::uniform(m, BcKind::CrossLambda, LambdaSpec::expression("exp(x1),1")), m);
  const NullspaceBasis basis = nullspace_basis(cs, m);
  const Eigen::MatrixXd ztz =
      Eigen::MatrixXd(basis.Z.transpose() * basis.Z);
  CHECK((ztz - Eigen::MatrixXd::Identity(basis.free_count, basis.free_count)).norm() <=
        1e-12);
}

TEST_CASE("columns respect cross-lambda constraints exactly") {
  const Mesh m = generate_structured_square(2);
  const LambdaSpec lam = LambdaSpec::expression("1+x1,x2-2");
  const BoundarySpec spec = BoundarySpec::uniform(m, BcKind::CrossLambda, lam);
  const auto cs = node_constraints(spec, m);
  const NullspaceBasis basis = nullspace_basis(cs, m);
  const Eigen::MatrixXd z = Eigen::MatrixXd(basis.Z);
  for (const auto& e : m.boundary_edges) {
    for (const int v : e.v) {
      const Eigen::Vector2d lambda_v = lam.eval(e, m.vertices[v]);
      for (int col = 0; col < basis.free_count; ++col) {
        const double det =
            lambda_v.x() * z(2 * v + 1, col) - lambda_v.y() * z(2 * v, col);
        CHECK(std::abs(det) <= 1e-13 * (1.0 + lambda_v.norm()));
      }
    }
  }
}

TEST_CASE("constraint spans are scale and sign invariant") {
  const Mesh m = generate_structured_square(2);
  const auto projector = [&](const std::string& expr) {
    const auto cs = node_constraints(
        BoundarySpec::uniform(m, BcKind::CrossLambda, LambdaSpec::expression(expr)), m);
    const NullspaceBasis basis = nullspace_basis(cs, m);
    return Eigen::MatrixXd(basis.Z * basis.Z.transpose());
  };
  const Eigen::MatrixXd p1 = projector("1,2");
  const Eigen::MatrixXd p2 = projector("-3,-6");
  CHECK((p1 - p2).norm() <= 1e-12);
}

TEST_CASE("representability of interpolants") {
  const Mesh m = generate_structured_square(4);
  const int n = 2;
  const AnalyticField omega = intro_family(n);
  const FemField interp = interpolate(omega, m);

  // lambda collinear with omega_n: the interpolant satisfies the constraint
  const std::string expr = "exp(2*x1)*cos(2*x2),0-exp(2*x1)*sin(2*x2)";
  {
    const auto cs = node_constraints(
        BoundarySpec::uniform(m, BcKind::CrossLambda, LambdaSpec::expression(expr)), m);
    const NullspaceBasis basis = nullspace_basis(cs, m);
    const Eigen::VectorXd projected = basis.Z * (basis.Z.transpose() * interp.dofs());
    CHECK((projected - interp.dofs()).norm() <= 1e-10 * interp.dofs().norm());
  }

  // classical condition: corners force omega = 0 but omega_n never vanishes
  {
    const auto cs =
        node_constraints(BoundarySpec::uniform(m, BcKind::Tangential0), m);
    const NullspaceBasis basis = nullspace_basis(cs, m);
    const Eigen::VectorXd projected = basis.Z * (basis.Z.transpose() * interp.dofs());
    CHECK((projected - interp.dofs()).norm() > 1e-3 * interp.dofs().norm());
  }
}

TEST_CASE("boundary spec json round trip and validation") {
  const Mesh m = generate_structured_square(1);
  const std::string text = R"({"segments":{
      "1": {"kind": "cross_lambda", "lambda": "nu"},
      "2": {"kind": "scalar_lambda", "lambda": "expr:1,0"},
      "3": {"kind": "free"},
      "4": {"kind": "normal0"}}})";
  const BoundarySpec spec = BoundarySpec::parse_json(text);
  spec.require_covers(m);
  CHECK(spec.condition_for(1).kind == BcKind::CrossLambda);
  CHECK(spec.condition_for(2).kind == BcKind::ScalarLambda);
  CHECK(spec.condition_for(3).kind == BcKind::Free);
  CHECK(spec.condition_for(4).kind == BcKind::Normal0);

  const BoundarySpec round = BoundarySpec::parse_json(spec.to_json_string());
  CHECK(round.condition_for(1).lambda.source() == "nu");

  CHECK_THROWS_AS(BoundarySpec::parse_json(R"({"segments":{"1":{"kind":"weird"}}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(BoundarySpec::parse_json(R"({"segments":{"1":{"kind":"cross_lambda"}}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      BoundarySpec::parse_json(R"({"segments":{"1":{"kind":"free","lambda":"nu"}}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      BoundarySpec::parse_json(R"({"segments":{"1":{"kind":"free"}},"extra":1})"),
      std::invalid_argument);

  BoundarySpec missing;
  missing.segments[1] = {BcKind::Free, LambdaSpec()};
  CHECK_THROWS_AS(missing.require_covers(m), std::invalid_argument);

  // scalar_lambda constrains omega to be orthogonal to lambda
  const Mesh m2 = generate_structured_square(2);
  const auto cs = node_constraints(
      BoundarySpec::uniform(m2, BcKind::ScalarLambda, LambdaSpec::expression("0,1")), m2);
  const NodeConstraint* side = nullptr;
  for (const auto& nc : cs)
    if ((m2.vertices[nc.vertex] - Eigen::Vector2d(0.5, 0.0)).norm() < 1e-12) side = &nc;
  REQUIRE(side != nullptr);
  CHECK(side->dim == 1);
  CHECK(std::abs(side->basis[0].x()) == doctest::Approx(1.0));
}
