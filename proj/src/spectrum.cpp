#include "gaffney/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace gaffney {

namespace {

/// Lower Cholesky factor of B; reports the first non-positive pivot.
Eigen::MatrixXd cholesky_or_throw(const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(B.rows());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double diag = B(j, j);
    for (int k = 0; k < j; ++k) diag -= L(j, k) * L(j, k);
    if (!(diag > 0.0))
      throw std::invalid_argument("solve_gevp: B is not positive definite (pivot " +
                                  std::to_string(j) + " = " + std::to_string(diag) + ")");
    L(j, j) = std::sqrt(diag);
    for (int i = j + 1; i < n; ++i) {
      double s = B(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  return L;
}

}  // namespace

EigenSolution solve_gevp(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw std::invalid_argument("solve_gevp: matrices must be square and of equal size");
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd L = cholesky_or_throw(B);
  // C = L^-1 A L^-T, then A v = mu B v with v = L^-T y for eigenpairs (mu, y) of C
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(A);
  C = L.triangularView<Eigen::Lower>().solve(C.transpose().eval());
  C = 0.5 * (C + C.transpose().eval());  // restore exact symmetry
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(C);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("solve_gevp: eigensolver failed to converge");
  EigenSolution out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order; report descending
  const Eigen::MatrixXd vec =
      L.transpose().triangularView<Eigen::Upper>().solve(solver.eigenvectors());
  for (int i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()[n - 1 - i];
    out.vectors.col(i) = vec.col(n - 1 - i);
  }
  return out;
}

GaffneyEstimate gaffney_constant(const Mesh& m, const BoundarySpec& spec) {
  const LambdaReport report = validate_lambda(spec, m);
  if (!report.ok())
    throw std::invalid_argument("gaffney_constant: lambda vanishes on a segment");
  const auto constraints = node_constraints(spec, m);
  const NullspaceBasis basis = nullspace_basis(constraints, m);
  if (basis.free_count < 1)
    throw std::invalid_argument("gaffney_constant: empty constraint space (F = 0)");
  const QuadraticForms q = assemble(m);
  const Eigen::MatrixXd Ar =
      Eigen::MatrixXd(basis.Z.transpose() * q.A * basis.Z);
  const Eigen::MatrixXd Br =
      Eigen::MatrixXd(basis.Z.transpose() * (q.D + q.M) * basis.Z);
  const EigenSolution sol = solve_gevp(Ar, Br);

  GaffneyEstimate est;
  est.h = m.longest_edge();
  est.free_count = basis.free_count;
  est.lambda_max = sol.values[0];
  const Eigen::VectorXd v = sol.vectors.col(0);
  est.eigenfield = basis.Z * v;
  est.residual = (Ar * v - est.lambda_max * (Br * v)).norm() / Ar.norm();
  return est;
}

std::vector<GaffneyEstimate> refinement_study(const std::string& domain, int k,
                                              const BoundarySpec& spec,
                                              int levels) {
  if (levels < 1) throw std::invalid_argument("refinement_study: levels must be >= 1");
  std::vector<GaffneyEstimate> rows;
  Mesh m = make_domain(domain, k);
  for (int level = 1; level <= levels; ++level) {
    GaffneyEstimate est = gaffney_constant(m, spec);
    est.level = level;
    rows.push_back(std::move(est));
    if (level < levels) m = refine(m);
  }
  return rows;
}

TraceEstimate trace_constant(const Mesh& m, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("trace_constant: eps must be positive");
  const QuadraticForms q = assemble(m);
  const Eigen::MatrixXd lhs = Eigen::MatrixXd(q.T) - eps * Eigen::MatrixXd(q.A);
  const Eigen::MatrixXd M = Eigen::MatrixXd(q.M);
  const EigenSolution sol = solve_gevp(lhs, M);
  TraceEstimate est;
  est.eps = eps;
  est.c = eps * std::max(0.0, sol.values[0]);
  est.witness = sol.vectors.col(0);
  return est;
}

}  // namespace gaffney
