#include "gaffney/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace gaffney {

AnalyticField::AnalyticField(int dim, std::vector<ScalarFunction> components)
    : dim_(dim), comps_(std::move(components)) {
  if (dim_ < 2) throw std::invalid_argument("AnalyticField: dimension must be >= 2");
  if (static_cast<int>(comps_.size()) != dim_)
    throw std::invalid_argument("AnalyticField: need one component per dimension");
}

Eigen::VectorXd AnalyticField::eval(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = comps_[i].value(x);
  return v;
}

Eigen::MatrixXd AnalyticField::jacobian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd jac(dim_, dim_);
  for (int i = 0; i < dim_; ++i) jac.row(i) = comps_[i].gradient(x).transpose();
  return jac;
}

int CrossValue::pair_index(int n, int i, int j) {
  // lexicographic position of (i, j), i < j, among all ordered pairs
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

double CrossValue::at(int i, int j) const {
  if (i == j) return 0.0;
  if (i < j) return comp[pair_index(dim, i, j)];
  return -comp[pair_index(dim, j, i)];
}

CrossValue cross(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cross: dimension mismatch");
  const int n = static_cast<int>(a.size());
  CrossValue c;
  c.dim = n;
  c.comp.resize(CrossValue::pair_count(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c.comp[k++] = a[i] * b[j] - a[j] * b[i];
  return c;
}

CrossValue curl_from_jacobian(const Eigen::MatrixXd& jac) {
  const int n = static_cast<int>(jac.rows());
  CrossValue c;
  c.dim = n;
  c.comp.resize(CrossValue::pair_count(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c.comp[k++] = jac(j, i) - jac(i, j);
  return c;
}

double div_from_jacobian(const Eigen::MatrixXd& jac) { return jac.trace(); }

double identity_residual_from_jacobian(const Eigen::MatrixXd& jac) {
  const int n = static_cast<int>(jac.rows());
  const double lhs = curl_from_jacobian(jac).norm_squared() +
                     div_from_jacobian(jac) * div_from_jacobian(jac) -
                     jac.squaredNorm();
  double rhs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      rhs += jac(i, i) * jac(j, j) - jac(i, j) * jac(j, i);
  return lhs - 2.0 * rhs;
}

FemField::FemField(const Mesh& mesh, Eigen::VectorXd dofs)
    : mesh_(&mesh), dofs_(std::move(dofs)) {
  if (dofs_.size() != mesh.dof_count())
    throw std::invalid_argument("FemField: DOF vector size mismatch");
}

Eigen::Vector2d FemField::vertex_value(int v) const {
  return {dofs_[2 * v], dofs_[2 * v + 1]};
}

Eigen::Vector2d FemField::value_in(int tri, const Eigen::Vector2d& x) const {
  const auto& t = mesh_->triangles[tri];
  const Eigen::Vector2d& p0 = mesh_->vertices[t[0]];
  const Eigen::Vector2d& p1 = mesh_->vertices[t[1]];
  const Eigen::Vector2d& p2 = mesh_->vertices[t[2]];
  const double area2 = 2.0 * mesh_->triangle_area(tri);
  const double l0 = ((p1.x() - x.x()) * (p2.y() - x.y()) -
                     (p2.x() - x.x()) * (p1.y() - x.y())) / area2;
  const double l1 = ((p2.x() - x.x()) * (p0.y() - x.y()) -
                     (p0.x() - x.x()) * (p2.y() - x.y())) / area2;
  const double l2 = 1.0 - l0 - l1;
  return l0 * vertex_value(t[0]) + l1 * vertex_value(t[1]) + l2 * vertex_value(t[2]);
}

Eigen::Matrix2d FemField::jacobian_in(int tri) const {
  const auto& t = mesh_->triangles[tri];
  const Eigen::Vector2d& p0 = mesh_->vertices[t[0]];
  const Eigen::Vector2d& p1 = mesh_->vertices[t[1]];
  const Eigen::Vector2d& p2 = mesh_->vertices[t[2]];
  const double area2 = 2.0 * mesh_->triangle_area(tri);
  const Eigen::Vector2d g0(p1.y() - p2.y(), p2.x() - p1.x());
  const Eigen::Vector2d g1(p2.y() - p0.y(), p0.x() - p2.x());
  const Eigen::Vector2d g2(p0.y() - p1.y(), p1.x() - p0.x());
  Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
  const std::array<Eigen::Vector2d, 3> grads = {g0 / area2, g1 / area2, g2 / area2};
  for (int local = 0; local < 3; ++local) {
    const Eigen::Vector2d uv = vertex_value(t[local]);
    jac.row(0) += uv.x() * grads[local].transpose();
    jac.row(1) += uv.y() * grads[local].transpose();
  }
  return jac;
}

int FemField::locate_or_throw(const Eigen::Vector2d& x) const {
  const int t = mesh_->locate(x);
  if (t < 0)
    throw std::domain_error("FemField: point (" + std::to_string(x.x()) + ", " +
                            std::to_string(x.y()) + ") is outside the mesh");
  return t;
}

Eigen::Vector2d FemField::value_at(const Eigen::Vector2d& x) const {
  return value_in(locate_or_throw(x), x);
}

Eigen::Matrix2d FemField::jacobian_at(const Eigen::Vector2d& x) const {
  return jacobian_in(locate_or_throw(x));
}

FemField interpolate(const AnalyticField& f, const Mesh& m) {
  if (f.dimension() != 2)
    throw std::invalid_argument("interpolate: field must be two-dimensional");
  Eigen::VectorXd dofs(m.dof_count());
  Eigen::VectorXd x(2);
  for (int v = 0; v < m.vertex_count(); ++v) {
    x = m.vertices[v];
    dofs[2 * v] = f.component(0).value(x);
    dofs[2 * v + 1] = f.component(1).value(x);
  }
  return FemField(m, std::move(dofs));
}

CrossValue curl_at(const AnalyticField& f, const Eigen::VectorXd& x) {
  return curl_from_jacobian(f.jacobian(x));
}
double div_at(const AnalyticField& f, const Eigen::VectorXd& x) {
  return div_from_jacobian(f.jacobian(x));
}
Eigen::MatrixXd grad_at(const AnalyticField& f, const Eigen::VectorXd& x) {
  return f.jacobian(x);
}
double pointwise_identity_residual(const AnalyticField& f, const Eigen::VectorXd& x) {
  return identity_residual_from_jacobian(f.jacobian(x));
}

CrossValue curl_at(const FemField& f, const Eigen::Vector2d& x) {
  return curl_from_jacobian(f.jacobian_at(x));
}
double div_at(const FemField& f, const Eigen::Vector2d& x) {
  return div_from_jacobian(f.jacobian_at(x));
}
Eigen::MatrixXd grad_at(const FemField& f, const Eigen::Vector2d& x) {
  return f.jacobian_at(x);
}
double pointwise_identity_residual(const FemField& f, const Eigen::Vector2d& x) {
  return identity_residual_from_jacobian(f.jacobian_at(x));
}

double tangential_derivative(const ScalarFunction& f, const Mesh& m,
                             const Edge& e, int i, int j,
                             const Eigen::Vector2d& x) {
  if (!(1 <= i && i < j && j <= 2))
    throw std::invalid_argument("tangential_derivative: need 1 <= i < j <= 2");
  const Eigen::Vector2d a = m.vertices[e.v[0]];
  const Eigen::Vector2d b = m.vertices[e.v[1]];
  const Eigen::Vector2d d = b - a;
  const double t = d.dot(x - a) / d.squaredNorm();
  const double dist = (x - (a + t * d)).norm();
  if (t < -1e-10 || t > 1.0 + 1e-10 || dist > 1e-10 * (1.0 + e.length))
    throw std::invalid_argument("tangential_derivative: point is not on the edge");
  const Eigen::VectorXd g = f.gradient(x);
  return e.normal[j - 1] * g[i - 1] - e.normal[i - 1] * g[j - 1];
}

double max_partial_deviation(const AnalyticField& f,
                             const std::vector<Eigen::VectorXd>& pts) {
  double worst = 0.0;
  for (const auto& x : pts) {
    const Eigen::MatrixXd jac = f.jacobian(x);
    for (int i = 0; i < f.dimension(); ++i) {
      for (int j = 0; j < f.dimension(); ++j) {
        const double h = 1e-5 * (1.0 + std::abs(x[j]));
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double fd =
            (f.component(i).value(xp) - f.component(i).value(xm)) / (2.0 * h);
        const double dev = std::abs(fd - jac(i, j)) /
                           (1.0 + std::max(std::abs(fd), std::abs(jac(i, j))));
        worst = std::max(worst, dev);
      }
    }
  }
  return worst;
}

}  // namespace gaffney
