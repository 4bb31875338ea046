#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gaffney {

struct SuiteResult {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool all_pass() const;
};

/// Runs the identity suites over the named analytic fields:
/// coded-partial self-consistency, the pointwise algebraic identity (both
/// analytic and nodal), the tangential-derivative product rule, the
/// integration-by-parts identity, orthogonal invariance and flow
/// rectification. Randomized inputs derive from the seed.
VerifyReport run_verification(const std::vector<std::string>& field_names,
                              std::uint64_t seed);

}  // namespace gaffney
