#pragma once

#include <string>
#include <vector>

#include "gaffney/calculus.hpp"
#include "gaffney/forms.hpp"

namespace gaffney {

/// Built-in analytic fields by name:
///   "linear"                    (x1, x2)
///   "swap"                      (x2, x1), the harmonic lambda field
///   "constant"                  (1, 0)
///   "poly"                      (x1^2 - x2, x1 x2)
///   "trig"                      (sin x1 cos x2, exp(x1/2) sin x2)
///   "intro_family:<n>"          the 2D blow-up family
///   "scalar_lambda_family:<n>"  its 3D variant
///   "defect:wrong_sign_curl"    self-test fixture with a deliberately
///                               mistranscribed partial (not in the default
///                               corpus; the verification suite must flag it)
AnalyticField lookup_field(const std::string& name);

/// "two_form_family:<n>:<+1|-1>"
TwoForm3 lookup_two_form(const std::string& name);

/// Names verified by default: the well-formed fields above with
/// n in {1, 2, 3} for the families.
std::vector<std::string> default_field_corpus();

}  // namespace gaffney
