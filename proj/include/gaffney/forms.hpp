#pragma once

#include <Eigen/Dense>

#include "gaffney/calculus.hpp"

namespace gaffney {

/// 2-form on R^3 with coefficient functions for dx1^dx2, dx1^dx3, dx2^dx3.
///
/// Sign conventions are pinned through one fixed vector identification
/// v = (c23, -c13, c12): the exterior derivative corresponds to div v and
/// the codifferential to the classical curl of v. Both correspondences are
/// tested against hand-computed cases.
struct TwoForm3 {
  ScalarFunction c12, c13, c23;
};

/// Coefficient of dx1^dx2^dx3 in d(w):
/// d1 c23 - d2 c13 + d3 c12 (equals div of the proxy vector).
double d_two_form(const TwoForm3& w, const Eigen::Vector3d& x);

/// The three 1-form coefficients of delta(w), computed as the classical
/// curl of the proxy vector v = (c23, -c13, c12).
Eigen::Vector3d delta_two_form(const TwoForm3& w, const Eigen::Vector3d& x);

/// dx3 ^ w = c12 dx1^dx2^dx3; returns c12(x).
double wedge_dx3(const TwoForm3& w, const Eigen::Vector3d& x);

/// The proxy vector field v = (c23, -c13, c12) as an analytic field.
AnalyticField vector_proxy(const TwoForm3& w);

/// Inverse of vector_proxy; round-tripping the coefficients is exact.
TwoForm3 two_form_from_proxy(const AnalyticField& v);

}  // namespace gaffney
