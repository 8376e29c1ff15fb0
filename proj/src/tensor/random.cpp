#include <cmath>
#include <numbers>

#include "privsq/tensor.hpp"

namespace privsq {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - u lies in (0, 1], keeping the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

namespace {

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix g(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

}  // namespace

Matrix haar_unitary(std::size_t d, Rng& rng) {
  if (d < 1) throw DomainError("haar_unitary: dimension must be positive");
  const Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * identity(d);
  const Matrix& r = qr.matrixQR();
  for (std::size_t j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    const Complex phase = mag > 0.0 ? rjj / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

Matrix haar_unitary(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(d, rng);
}

DensityOperator random_density(const SystemLayout& layout, std::size_t rank, Rng& rng) {
  const std::size_t d = layout.total_dim();
  if (rank < 1 || rank > d)
    throw DomainError("random_density: rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(d) + "]");
  const Matrix g = ginibre(d, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator::unchecked(layout, hermitian_part(rho));
}

DensityOperator random_density(const SystemLayout& layout, std::size_t rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(layout, rank, rng);
}

}  // namespace privsq
