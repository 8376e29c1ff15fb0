#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace privsq {

// One identity or inequality checked over a batch of random instances.
// For identities the residual is |LHS - RHS|; for inequalities it is the
// largest violation LHS - RHS (negative when every instance has slack).
struct IdentityCheck {
  std::string identity;
  std::size_t instances = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<IdentityCheck> checks;

  bool pass() const;
};

struct SuiteOptions {
  std::size_t instances = 100;
  std::uint64_t seed = 0;
  /// Replaces every check's default tolerance when set.
  std::optional<double> tolerance;
};

/// lemmas, ssa, chain, dual, fvg, continuity, thm1
const std::vector<std::string>& suite_names();

/// Throws DomainError for an unknown suite name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace privsq
