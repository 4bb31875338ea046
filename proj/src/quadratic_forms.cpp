#include "gaffney/quadratic_forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace gaffney {

namespace {

struct ElementGeometry {
  double area;
  std::array<Eigen::Vector2d, 3> grad;  // P1 basis gradients
};

ElementGeometry element_geometry(const Mesh& m, int t) {
  const auto& tri = m.triangles[t];
  const Eigen::Vector2d& p0 = m.vertices[tri[0]];
  const Eigen::Vector2d& p1 = m.vertices[tri[1]];
  const Eigen::Vector2d& p2 = m.vertices[tri[2]];
  ElementGeometry g;
  g.area = m.triangle_area(t);
  const double scale = (p1 - p0).squaredNorm() + (p2 - p0).squaredNorm();
  if (!(g.area > 1e-14 * scale))
    throw std::runtime_error("assemble: degenerate triangle " + std::to_string(t));
  const double area2 = 2.0 * g.area;
  g.grad[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / area2;
  g.grad[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / area2;
  g.grad[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / area2;
  return g;
}

}  // namespace

QuadraticForms assemble(const Mesh& m) {
  QuadraticForms q;
  q.dof_count = m.dof_count();
  std::vector<Eigen::Triplet<double>> ta, td, tm, tt;
  ta.reserve(18 * m.triangle_count());
  td.reserve(36 * m.triangle_count());
  tm.reserve(18 * m.triangle_count());
  tt.reserve(8 * m.boundary_edges.size());

  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles[t];
    const ElementGeometry g = element_geometry(m, t);

    // grad energy and mass act component-wise with the scalar P1 blocks
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double ka = g.area * g.grad[a].dot(g.grad[b]);
        const double mm = g.area / 12.0 * (a == b ? 2.0 : 1.0);
        for (int c = 0; c < 2; ++c) {
          ta.emplace_back(2 * tri[a] + c, 2 * tri[b] + c, ka);
          tm.emplace_back(2 * tri[a] + c, 2 * tri[b] + c, mm);
        }
      }
    }

    // curl+div energy: both are constant per triangle, so the element
    // matrix is area * (c c^T + d d^T) over the six local DOFs
    Eigen::Matrix<double, 6, 1> curl_coeff, div_coeff;
    for (int a = 0; a < 3; ++a) {
      // curl = d1 omega_2 - d2 omega_1, div = d1 omega_1 + d2 omega_2
      curl_coeff[2 * a] = -g.grad[a].y();
      curl_coeff[2 * a + 1] = g.grad[a].x();
      div_coeff[2 * a] = g.grad[a].x();
      div_coeff[2 * a + 1] = g.grad[a].y();
    }
    const Eigen::Matrix<double, 6, 6> elem =
        g.area * (curl_coeff * curl_coeff.transpose() +
                  div_coeff * div_coeff.transpose());
    for (int a = 0; a < 3; ++a)
      for (int ca = 0; ca < 2; ++ca)
        for (int b = 0; b < 3; ++b)
          for (int cb = 0; cb < 2; ++cb)
            td.emplace_back(2 * tri[a] + ca, 2 * tri[b] + cb,
                            elem(2 * a + ca, 2 * b + cb));
  }

  // boundary mass: exact P1 trace integrals per edge
  for (const auto& e : m.boundary_edges) {
    const double third = e.length / 3.0, sixth = e.length / 6.0;
    for (int c = 0; c < 2; ++c) {
      tt.emplace_back(2 * e.v[0] + c, 2 * e.v[0] + c, third);
      tt.emplace_back(2 * e.v[1] + c, 2 * e.v[1] + c, third);
      tt.emplace_back(2 * e.v[0] + c, 2 * e.v[1] + c, sixth);
      tt.emplace_back(2 * e.v[1] + c, 2 * e.v[0] + c, sixth);
    }
  }

  const int n = q.dof_count;
  q.A.resize(n, n);
  q.D.resize(n, n);
  q.M.resize(n, n);
  q.T.resize(n, n);
  q.A.setFromTriplets(ta.begin(), ta.end());
  q.D.setFromTriplets(td.begin(), td.end());
  q.M.setFromTriplets(tm.begin(), tm.end());
  q.T.setFromTriplets(tt.begin(), tt.end());
  return q;
}

GaffneyQuotient quotient(const QuadraticForms& q, const Eigen::VectorXd& u) {
  if (u.size() != q.dof_count)
    throw std::invalid_argument("quotient: DOF vector size mismatch");
  if (u.isZero(0.0)) throw std::invalid_argument("quotient: zero field");
  GaffneyQuotient g;
  g.grad_energy = u.dot(q.A * u);
  g.curl_div_energy = u.dot(q.D * u);
  g.mass = u.dot(q.M * u);
  g.ratio = g.grad_energy / (g.curl_div_energy + g.mass);
  return g;
}

double ibp_identity_residual(const Mesh& m, const FemField& f) {
  // interior side: the integrand is constant per triangle
  double interior = 0.0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const Eigen::Matrix2d jac = f.jacobian_in(t);
    interior += m.triangle_area(t) * (jac(0, 0) * jac(1, 1) - jac(1, 0) * jac(0, 1));
  }
  // boundary side: f1 is linear on the edge, grad f2 constant on the
  // adjacent triangle, so the exact edge integral uses the endpoint mean
  std::map<std::pair<int, int>, int> edge_to_triangle;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles[t];
    for (int i = 0; i < 3; ++i) {
      const auto k = std::minmax(tri[i], tri[(i + 1) % 3]);
      edge_to_triangle.emplace(std::make_pair(k.first, k.second), t);
    }
  }
  double boundary = 0.0;
  for (const auto& e : m.boundary_edges) {
    const auto k = std::minmax(e.v[0], e.v[1]);
    const auto it = edge_to_triangle.find({k.first, k.second});
    if (it == edge_to_triangle.end())
      throw std::invalid_argument("ibp_identity_residual: boundary edge without triangle");
    const int adjacent = it->second;
    const Eigen::Matrix2d jac = f.jacobian_in(adjacent);
    const double f1_mean =
        0.5 * (f.vertex_value(e.v[0]).x() + f.vertex_value(e.v[1]).x());
    const double tangential = jac(1, 1) * e.normal.x() - jac(1, 0) * e.normal.y();
    boundary += e.length * f1_mean * tangential;
  }
  return std::abs(boundary - interior);
}

void write_coo(std::ostream& os, const Eigen::SparseMatrix<double>& m) {
  std::vector<std::tuple<int, int, double>> entries;
  entries.reserve(m.nonZeros());
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      entries.emplace_back(it.row(), it.col(), it.value());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::make_pair(std::get<0>(a), std::get<1>(a)) <
           std::make_pair(std::get<0>(b), std::get<1>(b));
  });
  char buf[64];
  for (const auto& [row, col, value] : entries) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", row, col, value);
    os << buf;
  }
}

}  // namespace gaffney
