#include "gaffney/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "gaffney/mesh.hpp"

namespace gaffney {

namespace {

constexpr int kMaxOrder = 96;

const std::pair<Eigen::VectorXd, Eigen::VectorXd>& cached_rule(int n) {
  static std::map<int, std::pair<Eigen::VectorXd, Eigen::VectorXd>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    Eigen::VectorXd x, w;
    gauss_legendre(n, x, w);
    it = cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first;
  }
  return it->second;
}

template <class Eval>
QuadResult escalate(const Eval& eval, double rel_tol) {
  QuadResult res;
  double prev = 0.0;
  bool have_prev = false;
  for (int order = 4; order <= kMaxOrder; order *= 2) {
    const double value = eval(order);
    res.value = value;
    res.order = order;
    if (have_prev) {
      res.error = std::abs(value - prev);
      if (res.error <= rel_tol * (std::abs(value) + 1e-300)) {
        res.converged = true;
        return res;
      }
    }
    prev = value;
    have_prev = true;
  }
  return res;
}

}  // namespace

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // evaluate P_n and its derivative by the three-term recurrence
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

QuadResult integrate_interval(const std::function<double(double)>& f, double a,
                              double b, double rel_tol) {
  const auto eval = [&](int order) {
    const auto& [x, w] = cached_rule(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += w[i] * f(mid + half * x[i]);
    return half * s;
  };
  return escalate(eval, rel_tol);
}

namespace {

double triangle_rule(const std::function<double(const Eigen::Vector2d&)>& f,
                     const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                     const Eigen::Vector2d& p2, int order) {
  // Duffy map of the tensor rule onto the triangle: u = s(1-t), v = t with
  // Jacobian (1-t); the area element contributes twice the triangle area.
  const auto& [x, w] = cached_rule(order);
  const double area2 = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                       (p2.x() - p0.x()) * (p1.y() - p0.y());
  double s = 0.0;
  for (int i = 0; i < order; ++i) {
    const double si = 0.5 * (1.0 + x[i]);
    for (int j = 0; j < order; ++j) {
      const double tj = 0.5 * (1.0 + x[j]);
      const double u = si * (1.0 - tj);
      const double v = tj;
      const Eigen::Vector2d p = p0 + u * (p1 - p0) + v * (p2 - p0);
      s += 0.25 * w[i] * w[j] * (1.0 - tj) * f(p);
    }
  }
  return s * area2;
}

}  // namespace

QuadResult integrate_triangle(const std::function<double(const Eigen::Vector2d&)>& f,
                              const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                              const Eigen::Vector2d& p2, double rel_tol) {
  return escalate([&](int order) { return triangle_rule(f, p0, p1, p2, order); },
                  rel_tol);
}

QuadResult integrate_mesh(const std::function<double(const Eigen::Vector2d&)>& f,
                          const Mesh& m, double rel_tol) {
  const auto eval = [&](int order) {
    double s = 0.0;
    for (const auto& tri : m.triangles)
      s += triangle_rule(f, m.vertices[tri[0]], m.vertices[tri[1]],
                         m.vertices[tri[2]], order);
    return s;
  };
  return escalate(eval, rel_tol);
}

QuadResult integrate_boundary(const std::function<double(const Eigen::Vector2d&)>& f,
                              const Mesh& m, double rel_tol) {
  const auto eval = [&](int order) {
    const auto& [x, w] = cached_rule(order);
    double s = 0.0;
    for (const auto& e : m.boundary_edges) {
      const Eigen::Vector2d a = m.vertices[e.v[0]];
      const Eigen::Vector2d b = m.vertices[e.v[1]];
      const Eigen::Vector2d mid = 0.5 * (a + b);
      const Eigen::Vector2d half = 0.5 * (b - a);
      double es = 0.0;
      for (int i = 0; i < order; ++i) es += w[i] * f(mid + x[i] * half);
      s += 0.5 * e.length * es;
    }
    return s;
  };
  return escalate(eval, rel_tol);
}

QuadResult integrate_box(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                         double rel_tol) {
  const int dim = static_cast<int>(lo.size());
  if (hi.size() != dim) throw std::invalid_argument("integrate_box: dimension mismatch");
  const auto eval = [&](int order) {
    const auto& [x, w] = cached_rule(order);
    double scale = 1.0;
    for (int d = 0; d < dim; ++d) scale *= 0.5 * (hi[d] - lo[d]);
    std::vector<int> idx(dim, 0);
    Eigen::VectorXd p(dim);
    double s = 0.0;
    while (true) {
      double wt = 1.0;
      for (int d = 0; d < dim; ++d) {
        p[d] = 0.5 * (lo[d] + hi[d]) + 0.5 * (hi[d] - lo[d]) * x[idx[d]];
        wt *= w[idx[d]];
      }
      s += wt * f(p);
      int d = 0;
      for (; d < dim; ++d) {
        if (++idx[d] < order) break;
        idx[d] = 0;
      }
      if (d == dim) break;
    }
    return scale * s;
  };
  return escalate(eval, rel_tol);
}

}  // namespace gaffney
