#include <cmath>
#include <sstream>

#include "privsq/squashed.hpp"

namespace privsq {

std::string to_string(KeyBoundMode mode) {
  switch (mode) {
    case KeyBoundMode::kF1: return "F1";
    case KeyBoundMode::kF2: return "F2";
    case KeyBoundMode::kF3: return "F3";
  }
  return "?";
}

KeyBound key_bound_thm1(double esq_value, double epsilon, std::size_t key_dim, KeyBoundMode mode,
                        std::size_t parties, std::optional<int> constant1, std::optional<int> constant2) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("key bound: epsilon outside [0, 1]");
  if (key_dim < 2) throw DomainError("key bound: key dimension must be >= 2");
  KeyBound out;
  out.continuity.epsilon = std::sqrt(epsilon);
  out.continuity.log_dim = std::log2(static_cast<double>(key_dim));
  std::ostringstream arrangement;
  if (mode == KeyBoundMode::kF1) {
    out.continuity.kind = ContinuityKind::kF1;
    out.correction = continuity_bound(out.continuity);
    out.rhs = esq_value + out.correction;
    arrangement << "log2 K <= E_sq + f1(sqrt(eps), K)";
  } else {
    out.continuity.kind = mode == KeyBoundMode::kF2 ? ContinuityKind::kF2 : ContinuityKind::kF3;
    out.continuity.parties = static_cast<int>(parties);
    out.continuity.constant1 = constant1;
    out.continuity.constant2 = constant2;
    const double f = continuity_bound(out.continuity);
    const double scale = 2.0 / static_cast<double>(parties);
    out.correction = scale * f;
    out.rhs = scale * (esq_value + f);
    const char* name = mode == KeyBoundMode::kF2 ? "f2" : "f3";
    arrangement << "log2 K <= (2/m) [E_sq + " << name << "(sqrt(eps), K, m)] with m = " << parties
                << ", constants (" << *constant1 << ", " << *constant2 << ")";
  }
  out.arrangement = arrangement.str();
  return out;
}

double key_rate_bound(double esq_value, double epsilon, std::size_t n) {
  if (!(epsilon >= 0.0)) throw DomainError("key rate bound: epsilon must be >= 0");
  const double root = std::sqrt(epsilon);
  const double gap = 1.0 - 2.0 * root;
  if (!(gap > 0.0))
    throw DomainError("key rate bound: requires 1 - 2 sqrt(eps) > 0 (eps < 1/4), got eps = " +
                      std::to_string(epsilon));
  if (n < 1) throw DomainError("key rate bound: n must be >= 1");
  const double tail = 2.0 * (1.0 + root) * binary_entropy(root / (1.0 + root));
  return esq_value / gap + tail / (static_cast<double>(n) * gap);
}

}  // namespace privsq
