#include "gaffney/forms.hpp"

#include <stdexcept>

namespace gaffney {

namespace {

ScalarFunction negate(const ScalarFunction& f) {
  return {[v = f.value](const Eigen::VectorXd& x) { return -v(x); },
          [g = f.gradient](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            return -g(x);
          }};
}

}  // namespace

double d_two_form(const TwoForm3& w, const Eigen::Vector3d& x) {
  const Eigen::VectorXd p = x;
  return w.c23.gradient(p)[0] - w.c13.gradient(p)[1] + w.c12.gradient(p)[2];
}

Eigen::Vector3d delta_two_form(const TwoForm3& w, const Eigen::Vector3d& x) {
  const Eigen::VectorXd p = x;
  const Eigen::VectorXd g1 = w.c23.gradient(p);   // grad v1
  const Eigen::VectorXd g2 = -w.c13.gradient(p);  // grad v2
  const Eigen::VectorXd g3 = w.c12.gradient(p);   // grad v3
  return {g3[1] - g2[2], g1[2] - g3[0], g2[0] - g1[1]};
}

double wedge_dx3(const TwoForm3& w, const Eigen::Vector3d& x) {
  return w.c12.value(x);
}

AnalyticField vector_proxy(const TwoForm3& w) {
  return AnalyticField(3, {w.c23, negate(w.c13), w.c12});
}

TwoForm3 two_form_from_proxy(const AnalyticField& v) {
  if (v.dimension() != 3)
    throw std::invalid_argument("two_form_from_proxy: field must be 3D");
  TwoForm3 w;
  w.c23 = v.component(0);
  w.c13 = negate(v.component(1));
  w.c12 = v.component(2);
  return w;
}

}  // namespace gaffney
