#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privsq/tensor.hpp"

namespace privsq {

/// Key systems are labeled A1..Am, shields A1'..Am', extensions E.
std::string key_label(std::size_t party);
std::string shield_label(std::size_t party);
LabelList key_labels(std::size_t parties);
LabelList shield_labels(std::size_t parties);
inline const std::string kExtensionLabel = "E";

// Recipe for U (Phi ⊗ sigma) U^dagger with U = sum_k |k><k| ⊗ U^k.
//
// `controls` holds one shield unitary per key tuple (k_1, ..., k_m),
// indexed row-major (k_1 most significant), K^m entries in all. Only the
// all-equal tuples touch the state since Phi is supported there.
struct PrivateStateSpec {
  std::size_t key_dim = 2;
  std::size_t parties = 2;
  std::vector<std::size_t> shield_dims;
  DensityOperator shield_state;
  std::vector<Matrix> controls;

  SystemLayout key_layout() const;
  SystemLayout shield_layout() const;
  /// Keys, then shields.
  SystemLayout layout() const;
  std::size_t shield_dim() const;

  /// Throws on any violated invariant (dims, unitarity, missing controls).
  void validate() const;
};

/// Phi_AB = |Phi><Phi| with |Phi> = K^{-1/2} sum_i |ii>.
DensityOperator max_entangled(std::size_t key_dim, const std::string& a = "A", const std::string& b = "B");

/// m-party GHZ state K^{-1} sum_ij |i..i><j..j|, on A1..Am unless labels given.
DensityOperator ghz(std::size_t key_dim, std::size_t parties, LabelList labels = {});

/// Block-diagonal controlled unitary on keys ⊗ shields.
Matrix twisting_unitary(const PrivateStateSpec& spec);

/// Private state on keys ⊗ shields.
DensityOperator private_state(const PrivateStateSpec& spec);

/// U (Phi ⊗ sigma_{shields,E}) U^dagger with U acting trivially on E.
/// `shield_extension` lists the shields first (in the order of spec.shield_dims), then
/// the extension systems; its shield marginal must match spec.shield_state
/// within 1e-8.
DensityOperator private_state_extension(const PrivateStateSpec& spec,
                                        const DensityOperator& shield_extension);

/// Complete dephasing of the listed systems in their computational basis.
DensityOperator dephase(const DensityOperator& rho, const LabelList& labels);

/// Trace distance between the measured-and-shield-traced purification and
/// (1/K) sum_i |i..i><i..i| ⊗ omega_E. Every system of `purification` that
/// is neither a key nor a shield counts as purifying.
double privacy_deviation(const PureStateVector& purification, std::size_t key_dim,
                         const LabelList& keys, const LabelList& shields);

/// privacy_deviation evaluated on the spectral purification of rho.
double privacy_check(const DensityOperator& rho, std::size_t key_dim, const LabelList& keys,
                     const LabelList& shields);

struct ApproximatePrivateState {
  DensityOperator state;
  /// 1 - F(gamma, omega)
  double epsilon = 0.0;
};

/// omega = (1-p) gamma + p tau with tau a seeded full-rank random state.
ApproximatePrivateState approx_private_state(const PrivateStateSpec& spec, double noise,
                                             std::uint64_t seed);

/// (1-p) rho + p I/d
DensityOperator depolarize(const DensityOperator& rho, double p);

/// Haar-random controls on every key tuple and a random shield state of
/// rank `shield_rank` (0 means full rank).
PrivateStateSpec random_private_spec(std::size_t key_dim, std::size_t parties,
                                     const std::vector<std::size_t>& shield_dims, Rng& rng,
                                     std::size_t shield_rank = 0);

/// Random private state together with a random extension of its shield
/// state on a system E of dimension `ext_dim`.
struct PrivateExtension {
  PrivateStateSpec spec;
  DensityOperator shield_extension;
  DensityOperator state;
};

PrivateExtension random_private_extension(std::size_t key_dim, std::size_t parties,
                                          const std::vector<std::size_t>& shield_dims,
                                          std::size_t ext_dim, Rng& rng);

}  // namespace privsq
