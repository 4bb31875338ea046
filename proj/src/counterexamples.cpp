#include "gaffney/counterexamples.hpp"

#include <cmath>
#include <stdexcept>

#include "gaffney/mesh.hpp"
#include "gaffney/quadrature.hpp"

namespace gaffney {

namespace {

ScalarFunction exp_cos(int n) {
  return {[n](const Eigen::VectorXd& x) {
            return std::exp(n * x[0]) * std::cos(n * x[1]);
          },
          [n](const Eigen::VectorXd& x) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
            g[0] = n * std::exp(n * x[0]) * std::cos(n * x[1]);
            g[1] = -n * std::exp(n * x[0]) * std::sin(n * x[1]);
            return g;
          }};
}

ScalarFunction exp_sin(int n, double factor) {
  return {[n, factor](const Eigen::VectorXd& x) {
            return factor * std::exp(n * x[0]) * std::sin(n * x[1]);
          },
          [n, factor](const Eigen::VectorXd& x) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
            g[0] = factor * n * std::exp(n * x[0]) * std::sin(n * x[1]);
            g[1] = factor * n * std::exp(n * x[0]) * std::cos(n * x[1]);
            return g;
          }};
}

ScalarFunction zero_function() {
  return {[](const Eigen::VectorXd&) { return 0.0; },
          [](const Eigen::VectorXd& x) {
            return Eigen::VectorXd::Zero(x.size()).eval();
          }};
}

}  // namespace

AnalyticField intro_family(int n) {
  if (n < 1) throw std::invalid_argument("intro_family: n must be >= 1");
  return AnalyticField(2, {exp_cos(n), exp_sin(n, -1.0)});
}

AnalyticField scalar_lambda_family(int n) {
  if (n < 1) throw std::invalid_argument("scalar_lambda_family: n must be >= 1");
  return AnalyticField(3, {exp_cos(n), exp_sin(n, -1.0), zero_function()});
}

TwoForm3 two_form_family(int n, int sign) {
  if (n < 1) throw std::invalid_argument("two_form_family: n must be >= 1");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("two_form_family: sign must be +1 or -1");
  TwoForm3 w;
  w.c12 = zero_function();
  w.c13 = exp_cos(n);
  w.c23 = exp_sin(n, double(sign));
  return w;
}

AnalyticField harmonic_lambda_field() {
  return AnalyticField(
      2, {ScalarFunction{[](const Eigen::VectorXd& x) { return x[1]; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 1.0).eval();
                         }},
          ScalarFunction{[](const Eigen::VectorXd& x) { return x[0]; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(1.0, 0.0).eval();
                         }}});
}

namespace {

struct Densities {
  std::function<double(const Eigen::VectorXd&)> grad_sq;
  std::function<double(const Eigen::VectorXd&)> curl_div_sq;
  std::function<double(const Eigen::VectorXd&)> mass;
  int dim = 2;
};

Densities field_densities(const AnalyticField& f) {
  Densities d;
  d.dim = f.dimension();
  d.grad_sq = [f](const Eigen::VectorXd& x) { return f.jacobian(x).squaredNorm(); };
  d.curl_div_sq = [f](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd jac = f.jacobian(x);
    const double dv = div_from_jacobian(jac);
    return curl_from_jacobian(jac).norm_squared() + dv * dv;
  };
  d.mass = [f](const Eigen::VectorXd& x) { return f.eval(x).squaredNorm(); };
  return d;
}

Densities form_densities(const TwoForm3& w) {
  Densities d;
  d.dim = 3;
  d.grad_sq = [w](const Eigen::VectorXd& x) {
    return w.c12.gradient(x).squaredNorm() + w.c13.gradient(x).squaredNorm() +
           w.c23.gradient(x).squaredNorm();
  };
  d.curl_div_sq = [w](const Eigen::VectorXd& x) {
    const double dw = d_two_form(w, x);
    return dw * dw + delta_two_form(w, x).squaredNorm();
  };
  d.mass = [w](const Eigen::VectorXd& x) {
    const double a = w.c12.value(x), b = w.c13.value(x), c = w.c23.value(x);
    return a * a + b * b + c * c;
  };
  return d;
}

Densities densities_for(const std::string& family, int n) {
  if (family == "intro_family") return field_densities(intro_family(n));
  if (family == "scalar_lambda_family")
    return field_densities(scalar_lambda_family(n));
  if (family == "harmonic_lambda") return field_densities(harmonic_lambda_field());
  if (family == "two_form_family:+1") return form_densities(two_form_family(n, 1));
  if (family == "two_form_family:-1") return form_densities(two_form_family(n, -1));
  throw std::invalid_argument("unknown family '" + family + "'");
}

}  // namespace

std::vector<BlowupRow> blowup_ratios(const std::string& family,
                                     const std::string& domain,
                                     const std::vector<int>& ns) {
  std::vector<BlowupRow> rows;
  const bool three_dim = densities_for(family, 1).dim == 3;
  if (three_dim && domain != "cube")
    throw std::invalid_argument("family '" + family + "' integrates over domain 'cube'");
  Mesh mesh;
  if (!three_dim) mesh = make_domain(domain, 4);

  for (const int n : ns) {
    const Densities d = densities_for(family, n);
    BlowupRow row;
    row.family = family;
    row.domain = domain;
    row.n = n;
    QuadResult grad, curl_div, mass;
    if (three_dim) {
      const Eigen::Vector3d lo(0.0, 0.0, 0.0), hi(1.0, 1.0, 1.0);
      grad = integrate_box(d.grad_sq, lo, hi);
      curl_div = integrate_box(d.curl_div_sq, lo, hi);
      mass = integrate_box(d.mass, lo, hi);
    } else {
      const auto wrap = [](const std::function<double(const Eigen::VectorXd&)>& f) {
        return [f](const Eigen::Vector2d& x) { return f(Eigen::VectorXd(x)); };
      };
      grad = integrate_mesh(wrap(d.grad_sq), mesh);
      curl_div = integrate_mesh(wrap(d.curl_div_sq), mesh);
      mass = integrate_mesh(wrap(d.mass), mesh);
    }
    row.ratio_grad_mass = grad.value / mass.value;
    row.ratio_gaffney = grad.value / (curl_div.value + mass.value);
    row.quad_err = grad.error + curl_div.error + mass.error;
    row.converged = grad.converged && curl_div.converged && mass.converged;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gaffney
