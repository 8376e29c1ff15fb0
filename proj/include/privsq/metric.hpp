#pragma once

#include "privsq/tensor.hpp"

namespace privsq {

/// (1/2) ||rho - sigma||_1
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double trace_distance(const Matrix& rho, const Matrix& sigma);

/// Squared-root-fidelity convention F = ||sqrt(rho) sqrt(sigma)||_1^2,
/// clamped to [0, 1].
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
double fidelity(const Matrix& rho, const Matrix& sigma);

// Purifications of two states on a common reference R (dim = dim A) such
// that |<sigma_purification | rho_purification>|^2 equals their fidelity.
// rho_purification already has the optimal U_R applied.
struct FidelityPair {
  double fidelity = 0.0;
  PureStateVector rho_purification;
  PureStateVector sigma_purification;
  Matrix reference_unitary;  // U_R applied to the spectral purification of rho
};

FidelityPair uhlmann_align(const DensityOperator& rho, const DensityOperator& sigma,
                           const std::string& reference_label = "R");

/// Extension sigma_AB of sigma_A with F(rho_AB, sigma_AB) = F(rho_A, sigma_A).
/// The A systems are those of sigma_a's layout; the output uses rho_ab's
/// layout.
DensityOperator matched_extension(const DensityOperator& rho_ab, const DensityOperator& sigma_a);

}  // namespace privsq
