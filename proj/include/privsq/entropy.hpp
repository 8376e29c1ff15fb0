#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "privsq/tensor.hpp"

namespace privsq {

// Parties A_1..A_m and a (possibly empty) conditioning group E. An empty E
// means the unconditional quantity.
struct Partition {
  std::vector<LabelList> parties;
  LabelList conditioning;

  /// Throws LabelError on unknown labels or overlapping groups.
  void validate(const SystemLayout& layout) const;
};

/// -sum l log2 l over eigenvalues above tol::kRankCutoff.
double entropy_of_spectrum(const RealVector& eigenvalues);
double matrix_entropy(const Matrix& rho);

double vn_entropy(const DensityOperator& rho);

// Memoizing evaluator of marginal entropies H(X) of one fixed state, keyed
// by the set of labels in X.
class MarginalEntropies {
 public:
  explicit MarginalEntropies(const DensityOperator& rho) : rho_(rho) {}

  /// H of the union of `labels`; 0 for the empty set.
  double operator()(const LabelList& labels);

  /// H(A|B)
  double conditional(const LabelList& a, const LabelList& b);
  /// I(A;B|E)
  double mutual(const LabelList& a, const LabelList& b, const LabelList& e);

  const DensityOperator& state() const { return rho_; }

 private:
  const DensityOperator& rho_;
  std::map<LabelList, double> cache_;
};

/// H(AB) - H(B)
double cond_entropy(const DensityOperator& rho, const LabelList& a, const LabelList& b);

/// H(AE) + H(BE) - H(E) - H(ABE)
double cmi(const DensityOperator& rho, const LabelList& a, const LabelList& b, const LabelList& e = {});

/// sum_i H(A_i|E) - H(A_1...A_m|E)
double multi_info(const DensityOperator& rho, const std::vector<LabelList>& parties,
                  const LabelList& e = {});

/// H(A_1...A_m|E) - sum_i H(A_i | A_[m]\{i} E)
double multi_info_dual(const DensityOperator& rho, const std::vector<LabelList>& parties,
                       const LabelList& e = {});

/// Binary entropy in bits; throws DomainError outside [0, 1].
double binary_entropy(double x);

enum class ContinuityKind {
  kAfw,      // conditional entropy: 2 eps log d_A + (1+eps) h2(eps/(1+eps))
  kCmiCont,  // CMI: 2 eps log min(d_A, d_B) + 2 (1+eps) h2(eps/(1+eps))
  kF1,       // 2 eps log K + 2 (1+eps) h2(eps/(1+eps))
  kF2,       // m [b1 eps log K + b2 (1+eps) h2(eps/(1+eps))]
  kF3,       // m [c1 eps log K + c2 (1+eps) h2(eps/(1+eps))]
};

/// Default for the unspecified integer constants of the multipartite
/// bounds. A configuration value, not a derived constant.
inline constexpr int kDefaultMultipartiteConstant = 4;

struct ContinuityParams {
  ContinuityKind kind = ContinuityKind::kF1;
  double epsilon = 0.0;
  /// log2 of the relevant dimension (d_A, min(d_A,d_B), or K).
  double log_dim = 0.0;
  int parties = 2;
  std::optional<int> constant1;
  std::optional<int> constant2;
};

double continuity_bound(const ContinuityParams& params);

std::string to_string(ContinuityKind kind);

}  // namespace privsq
