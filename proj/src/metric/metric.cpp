#include "privsq/metric.hpp"

#include <algorithm>
#include <cmath>

namespace privsq {

namespace {

void require_same_layout(const DensityOperator& a, const DensityOperator& b, const char* what) {
  if (a.layout() != b.layout())
    throw ShapeError(std::string(what) + ": layouts differ: " + to_string(a.layout()) + " vs " +
                     to_string(b.layout()));
}

// Columns sqrt(l_k) v_k, zero-padded to `ref_dim` columns. As a column-major
// buffer this is exactly the amplitude vector of sum_k |k>_R sqrt(l_k)|v_k>_A
// under the R-first index convention.
Matrix purification_matrix(const Matrix& rho, Eigen::Index ref_dim) {
  const Eigensystem es = eigh(rho);
  const Eigen::Index d = rho.rows();
  Matrix x = Matrix::Zero(d, ref_dim);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double l = es.values(d - 1 - k);
    if (l > tol::kRankCutoff) x.col(k) = std::sqrt(l) * es.vectors.col(d - 1 - k);
  }
  return x;
}

Vector as_vector(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

// U maximizing |Tr(Y^dagger X U^T)|, i.e. the Uhlmann unitary on the
// reference for purification matrices X (of rho) and Y (of sigma).
Matrix uhlmann_unitary(const Matrix& x, const Matrix& y) {
  Eigen::JacobiSVD<Matrix> svd(y.adjoint() * x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return (svd.matrixV() * svd.matrixU().adjoint()).transpose();
}

}  // namespace

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  return 0.5 * eigvalsh(rho - sigma).cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_layout(rho, sigma, "trace_distance");
  return trace_distance(rho.matrix(), sigma.matrix());
}

double fidelity(const Matrix& rho, const Matrix& sigma) {
  // ||sqrt(rho) sqrt(sigma)||_1 = Tr sqrt(sqrt(rho) sigma sqrt(rho)). Clipping
  // the tiny eigenvalues keeps rounding noise from surviving the square root.
  const Matrix s = psd_sqrt(rho);
  const RealVector ev = eigvalsh(s * sigma * s);
  double root = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > tol::kRankCutoff) root += std::sqrt(ev(i));
  return std::clamp(root * root, 0.0, 1.0);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_layout(rho, sigma, "fidelity");
  return fidelity(rho.matrix(), sigma.matrix());
}

FidelityPair uhlmann_align(const DensityOperator& rho, const DensityOperator& sigma,
                           const std::string& reference_label) {
  require_same_layout(rho, sigma, "uhlmann_align");
  const auto d = static_cast<Eigen::Index>(rho.dim());
  const Matrix x = purification_matrix(rho.matrix(), d);
  const Matrix y = purification_matrix(sigma.matrix(), d);
  const Matrix u = uhlmann_unitary(x, y);
  const Matrix x_aligned = x * u.transpose();

  const SystemLayout layout = concat(SystemLayout{{reference_label, rho.dim()}}, rho.layout());
  Vector phi_rho = as_vector(x_aligned);
  Vector phi_sigma = as_vector(y);
  phi_rho.normalize();
  phi_sigma.normalize();
  const double f = fidelity(rho, sigma);
  return FidelityPair{f, PureStateVector(layout, std::move(phi_rho)),
                      PureStateVector(layout, std::move(phi_sigma)), u};
}

DensityOperator matched_extension(const DensityOperator& rho_ab, const DensityOperator& sigma_a) {
  const LabelList a_labels = sigma_a.layout().labels();
  for (const auto& s : sigma_a.layout().systems())
    if (!rho_ab.layout().contains(s.label) || rho_ab.layout().dim(s.label) != s.dim)
      throw ShapeError("matched_extension: marginal layout " + to_string(sigma_a.layout()) +
                       " is inconsistent with " + to_string(rho_ab.layout()));
  const LabelList b_labels = rho_ab.layout().complement(a_labels);

  // Purify rho_AB on a full-dimensional R and regard R B as the reference
  // of a purification of rho_A.
  LabelList ba = b_labels;
  ba.insert(ba.end(), a_labels.begin(), a_labels.end());
  const Matrix rho_ba = permute_systems(rho_ab, ba).matrix();
  const Eigen::Index d_ab = rho_ba.rows();
  const auto d_a = static_cast<Eigen::Index>(sigma_a.dim());
  const Eigen::Index d_b = d_ab / d_a;
  const Matrix z = purification_matrix(rho_ba, d_ab);  // (b,a) x r

  // Reshape to rows a and columns (r, b): amplitude index r*d_ab + b*d_a + a.
  const Eigen::Index d_ref = d_ab * d_b;
  const Matrix x = Eigen::Map<const Matrix>(z.data(), d_a, d_ref);
  const Matrix y = purification_matrix(sigma_a.matrix(), d_ref);
  const Matrix u = uhlmann_unitary(x, y);
  // Apply U^dagger to sigma's purification so it aligns with rho's.
  const Matrix y_aligned = y * u.conjugate();

  // Trace R: rows (b, a), columns r.
  const Matrix w = Eigen::Map<const Matrix>(y_aligned.data(), d_ab, d_ab);
  const Matrix sigma_ba = hermitian_part(w * w.adjoint());
  const DensityOperator out =
      DensityOperator::unchecked(rho_ab.layout().select(ba), sigma_ba / sigma_ba.trace().real());
  return permute_systems(out, rho_ab.layout().labels());
}

}  // namespace privsq
