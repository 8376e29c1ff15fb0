#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "privsq/errors.hpp"
#include "privsq/layout.hpp"
#include "privsq/rng.hpp"

namespace privsq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPsd = 1e-10;
inline constexpr double kUnitNorm = 1e-10;
inline constexpr double kIsometry = 1e-10;
/// Eigenvalues with magnitude below this count as zero (rank, 0 log 0).
inline constexpr double kRankCutoff = 1e-12;
}  // namespace tol

/// Largest entry magnitude.
double max_abs(const Matrix& m);
Matrix identity(std::size_t d);
/// (M + M^dagger) / 2
Matrix hermitian_part(const Matrix& m);
/// max |V^dagger V - I| <= tol
bool is_isometry(const Matrix& v, double tolerance = tol::kIsometry);

// A density operator over a labeled tensor-product space. The checked
// constructor enforces Hermiticity, unit trace, and positivity within the
// tolerances in privsq::tol.
class DensityOperator {
 public:
  DensityOperator(SystemLayout layout, Matrix matrix);

  /// Skips validation; for results of operations that preserve the
  /// invariants of their (already valid) inputs.
  static DensityOperator unchecked(SystemLayout layout, Matrix matrix);

  const SystemLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return layout_.total_dim(); }

  /// Same matrix under relabeled systems (dims must agree).
  DensityOperator relabeled(const LabelList& labels) const;

 private:
  DensityOperator(SystemLayout layout, Matrix matrix, bool);

  SystemLayout layout_;
  Matrix matrix_;
};

/// Throws InvariantError naming the first violated invariant.
void validate_density(const SystemLayout& layout, const Matrix& matrix);

class PureStateVector {
 public:
  PureStateVector(SystemLayout layout, Vector amplitudes);

  const SystemLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }

  /// |psi><psi|
  DensityOperator density() const;

 private:
  SystemLayout layout_;
  Vector amplitudes_;
};

// Linear isometry V: H_in -> H_out, stored with rows indexed by the output
// layout and columns by the input layout.
class Isometry {
 public:
  Isometry(SystemLayout input, SystemLayout output, Matrix matrix);

  const SystemLayout& input() const { return input_; }
  const SystemLayout& output() const { return output_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  SystemLayout input_;
  SystemLayout output_;
  Matrix matrix_;
};

Matrix kron(const Matrix& a, const Matrix& b);
DensityOperator kron(const DensityOperator& a, const DensityOperator& b);
PureStateVector kron(const PureStateVector& a, const PureStateVector& b);

/// Reduction of `matrix` (on `layout`) to the systems in `keep`, which stay
/// in layout order. No validation of the operator itself.
Matrix partial_trace(const Matrix& matrix, const SystemLayout& layout, const LabelList& keep);

/// Reduced state on `keep` (kept systems remain in their original order).
DensityOperator partial_trace(const DensityOperator& rho, const LabelList& keep);

/// Reduced state after tracing out `discard`.
DensityOperator trace_out(const DensityOperator& rho, const LabelList& discard);

/// Index map for a system reordering: entry n is the flat index, in
/// `layout`, of flat index n in the reordered layout.
std::vector<std::size_t> permutation_map(const SystemLayout& layout, const LabelList& new_order);

DensityOperator permute_systems(const DensityOperator& rho, const LabelList& new_order);
PureStateVector permute_systems(const PureStateVector& psi, const LabelList& new_order);

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

/// Spectral decomposition of the Hermitian part of `h`.
Eigensystem eigh(const Matrix& h);

/// Spectrum only; cheaper than eigh when vectors are not needed.
RealVector eigvalsh(const Matrix& h);

/// f applied to the spectrum of the Hermitian part of `h`.
template <typename F>
Matrix spectral_apply(const Matrix& h, F&& f) {
  const Eigensystem es = eigh(h);
  RealVector mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) mapped(i) = f(es.values(i));
  return es.vectors * mapped.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

/// Square root with eigenvalues below tol::kRankCutoff clipped to zero.
Matrix psd_sqrt(const Matrix& h);

/// Number of eigenvalues above tol::kRankCutoff.
std::size_t numerical_rank(const Matrix& h);

/// Spectral purification |phi> = sum_k sqrt(l_k) |k>_R |v_k>_A. The
/// reference system has dim = rank(rho) and is listed first.
PureStateVector purify(const DensityOperator& rho, const std::string& reference_label);

/// (V rho V^dagger) with V acting on `acting` (matched in order against the
/// isometry's input dims), followed by a partial trace over `discard`.
/// Untouched systems keep their relative order and precede V's outputs.
DensityOperator apply_stinespring(const DensityOperator& rho, const Isometry& v,
                                  const LabelList& acting, const LabelList& discard);

/// Haar-random unitary: complex Ginibre matrix, QR, and the phase
/// correction Q diag(r_ii / |r_ii|).
Matrix haar_unitary(std::size_t d, std::uint64_t seed);
Matrix haar_unitary(std::size_t d, Rng& rng);

/// G G^dagger / Tr with G a d x rank complex Ginibre matrix.
DensityOperator random_density(const SystemLayout& layout, std::size_t rank, std::uint64_t seed);
DensityOperator random_density(const SystemLayout& layout, std::size_t rank, Rng& rng);

/// Basis projector |i><i| on a single system.
DensityOperator basis_state(const std::string& label, std::size_t dim, std::size_t index);

/// I/d on `layout`.
DensityOperator maximally_mixed(const SystemLayout& layout);

}  // namespace privsq
