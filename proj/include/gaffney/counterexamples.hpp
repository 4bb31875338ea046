#pragma once

#include <string>
#include <vector>

#include "gaffney/calculus.hpp"
#include "gaffney/forms.hpp"

namespace gaffney {

/// omega_n(x) = (e^{n x1} cos(n x2), -e^{n x1} sin(n x2)); divergence- and
/// curl-free with |omega_n|^2 = e^{2 n x1} and |grad omega_n|^2 = 2 n^2 e^{2 n x1}.
AnalyticField intro_family(int n);

/// 3D variant (third component zero); satisfies <lambda; omega> = 0 for
/// lambda = (0, 0, 1) on any domain while keeping the same blow-up law.
AnalyticField scalar_lambda_family(int n);

/// 2-form e^{n x1} cos(n x2) dx1^dx3 + sign * e^{n x1} sin(n x2) dx2^dx3.
/// wedge_dx3 vanishes for both signs; exactly one sign is d- and
/// delta-closed under the pinned conventions.
TwoForm3 two_form_family(int n, int sign);

/// omega = (x2, x1): harmonic, so with lambda = omega on the boundary the
/// mass-free inequality fails.
AnalyticField harmonic_lambda_field();

struct BlowupRow {
  std::string family;
  std::string domain;
  int n = 0;
  double ratio_grad_mass = 0.0;
  double ratio_gaffney = 0.0;
  double quad_err = 0.0;
  bool converged = true;
};

/// One row per n: ratios of adaptively integrated closed-form densities.
/// 2D families integrate over the named benchmark mesh; 3D families and the
/// 2-form family integrate over the unit cube (domain "cube").
std::vector<BlowupRow> blowup_ratios(const std::string& family,
                                     const std::string& domain,
                                     const std::vector<int>& ns);

}  // namespace gaffney
