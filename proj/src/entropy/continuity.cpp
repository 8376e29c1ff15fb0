#include "privsq/entropy.hpp"

namespace privsq {

std::string to_string(ContinuityKind kind) {
  switch (kind) {
    case ContinuityKind::kAfw: return "AFW";
    case ContinuityKind::kCmiCont: return "CMI_CONT";
    case ContinuityKind::kF1: return "F1";
    case ContinuityKind::kF2: return "F2";
    case ContinuityKind::kF3: return "F3";
  }
  return "?";
}

double continuity_bound(const ContinuityParams& p) {
  const double eps = p.epsilon;
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("continuity_bound: epsilon outside [0, 1]");
  if (!(p.log_dim >= 0.0)) throw DomainError("continuity_bound: log-dimension must be >= 0");
  // (1 + eps) h2(eps / (1 + eps))
  const double tail = (1.0 + eps) * binary_entropy(eps / (1.0 + eps));
  switch (p.kind) {
    case ContinuityKind::kAfw: return 2.0 * eps * p.log_dim + tail;
    case ContinuityKind::kCmiCont:
    case ContinuityKind::kF1: return 2.0 * eps * p.log_dim + 2.0 * tail;
    case ContinuityKind::kF2:
    case ContinuityKind::kF3: {
      if (p.parties < 2) throw DomainError("continuity_bound: multipartite bound needs m >= 2");
      if (!p.constant1 || !p.constant2)
        throw DomainError("continuity_bound: " + to_string(p.kind) + " requires both constants");
      if (*p.constant1 < 1 || *p.constant2 < 1)
        throw DomainError("continuity_bound: constants must be positive integers");
      return p.parties * (*p.constant1 * eps * p.log_dim + *p.constant2 * tail);
    }
  }
  throw DomainError("continuity_bound: unknown kind");
}

}  // namespace privsq
