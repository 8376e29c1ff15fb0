#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privsq/entropy.hpp"
#include "privsq/optimizer.hpp"
#include "privsq/tensor.hpp"

namespace privsq {

// Isometry V: E' -> E ⊗ F given by the first d_eprime columns of exp(A),
// where A = (G - G^dagger)/2 and G(i, j) = params[i n + j] + i params[n^2 + i n + j]
// for n = d_e d_f. Output index of |e, f> is e d_f + f.
struct SquashingAnsatz {
  std::size_t d_eprime = 1;
  std::size_t d_e = 1;
  std::size_t d_f = 1;
  RealVector params;

  static std::size_t param_count(std::size_t d_e, std::size_t d_f);
  /// All-zero parameters: V embeds E' into the leading basis vectors of E ⊗ F.
  static SquashingAnsatz identity(std::size_t d_eprime, std::size_t d_e, std::size_t d_f);
  static SquashingAnsatz random(std::size_t d_eprime, std::size_t d_e, std::size_t d_f, double scale,
                                std::uint64_t seed);

  void validate() const;
  Matrix isometry() const;
};

/// Extension dims; zero means "same as the purifying dimension d_E'".
struct SquashDims {
  std::size_t d_e = 0;
  std::size_t d_f = 0;
};

// Purification of a fixed state, held as a matrix X whose column k is the
// k-th branch vector, so |phi> = sum_k |k>_E' ⊗ X e_k. Squashing with an
// ansatz V gives omega = Tr_F[(V ⊗ I) phi (V ⊗ I)^dagger] on the state's
// systems followed by E.
class SquashingProblem {
 public:
  SquashingProblem(SystemLayout state_layout, Matrix branches, std::string extension_label = "E");
  /// Spectral purification of rho (reference dim = rank).
  static SquashingProblem from_state(const DensityOperator& rho, std::string extension_label = "E");

  std::size_t purifying_dim() const { return static_cast<std::size_t>(branches_.cols()); }
  const SystemLayout& state_layout() const { return state_layout_; }

  DensityOperator extend(const SquashingAnsatz& ansatz) const;
  DensityOperator extend(const Matrix& isometry, std::size_t d_e, std::size_t d_f) const;

 private:
  SystemLayout state_layout_;
  Matrix branches_;
  std::string extension_label_;
};

/// Purify rho on E', apply the ansatz isometry E' -> E ⊗ F, trace F.
/// Requires ansatz.d_eprime == rank(rho).
DensityOperator extend_by_squashing(const DensityOperator& rho, const SquashingAnsatz& ansatz,
                                    const std::string& extension_label = "E");

enum class MultiFlavor { kTotal, kDual };
std::string to_string(MultiFlavor flavor);

struct EsqResult {
  /// Upper bound: (1/2) x the best information value found.
  double value = 0.0;
  SquashingAnsatz ansatz;
  std::size_t d_eprime = 1;
  std::size_t d_e = 1;
  std::size_t d_f = 1;
  OptimizerDiagnostics diagnostics;
  /// False when the optimizer never produced a finite value.
  bool ok = true;
};

/// Upper bound on E_sq(A;B) over squashing extensions of the given dims.
/// Systems outside the two parties are traced out first.
EsqResult esq_upper(const DensityOperator& rho, const Partition& bipartition, SquashDims dims,
                    const OptimizerConfig& cfg);

/// Upper bound on E_sq (kTotal) or the dual-flavored squashed entanglement.
EsqResult esq_multi_upper(const DensityOperator& rho, const Partition& partition, MultiFlavor flavor,
                          SquashDims dims, const OptimizerConfig& cfg);

// Key, shield, and extension labels of a private-state extension.
struct PrivateLabels {
  LabelList keys;
  LabelList shields;
  LabelList extension;
};

enum class IdentityKind { kL1, kKeySplit, kL2, kL3 };
std::string to_string(IdentityKind kind);

/// |LHS - RHS| of the named identity evaluated on gamma_ext.
double lemma_residual(const DensityOperator& gamma_ext, IdentityKind kind, const PrivateLabels& labels);

enum class KeyBoundMode { kF1, kF2, kF3 };
std::string to_string(KeyBoundMode mode);

struct KeyBound {
  /// Compare log2 K against this.
  double rhs = 0.0;
  double correction = 0.0;
  ContinuityParams continuity;
  std::string arrangement;
};

/// Bipartite: esq + f1(sqrt(eps), K). Multipartite: (2/m)(esq + f(sqrt(eps), K, m)).
KeyBound key_bound_thm1(double esq_value, double epsilon, std::size_t key_dim, KeyBoundMode mode,
                        std::size_t parties = 2, std::optional<int> constant1 = std::nullopt,
                        std::optional<int> constant2 = std::nullopt);

/// esq/(1-2 sqrt(eps)) + 2(1+sqrt(eps)) h2(sqrt(eps)/(1+sqrt(eps))) / (n (1-2 sqrt(eps))).
/// Requires 1 - 2 sqrt(eps) > 0.
double key_rate_bound(double esq_value, double epsilon, std::size_t n);

struct ChannelEsqResult {
  double value = 0.0;
  /// Always true: the outer maximization is heuristic.
  bool heuristic = true;
  Vector input;  // best pure input on A ⊗ A'
  SquashingAnsatz ansatz;
  std::size_t d_e = 1;
  std::size_t d_f = 1;
  OptimizerDiagnostics diagnostics;
};

/// Alternating max over pure inputs psi_AA' / min over squashing channels on
/// the dilation environment. `output_label` names the channel output among
/// the dilation's output systems; the rest form the environment.
ChannelEsqResult esq_channel_upper(const Isometry& dilation, const std::string& output_label,
                                   SquashDims dims, const OptimizerConfig& cfg);

/// Standard qubit channel dilations with input "A'", output "B", environment "Env".
Isometry identity_channel_dilation();
Isometry depolarizing_channel_dilation(double p);
Isometry replacement_channel_dilation(std::size_t target_state = 0);
Isometry amplitude_damping_dilation(double gamma);

}  // namespace privsq
