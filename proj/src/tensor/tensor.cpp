#include "privsq/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace privsq {

namespace {

// Flat indices (in `layout`) of every basis vector of the subsystems
// `labels`, enumerated row-major over `labels` with all other digits zero.
std::vector<std::size_t> offsets(const SystemLayout& layout, const LabelList& labels) {
  const auto strides = layout.strides();
  std::vector<std::size_t> out{0};
  for (const auto& l : labels) {
    const std::size_t p = layout.position(l);
    const std::size_t d = layout.systems()[p].dim;
    std::vector<std::size_t> next;
    next.reserve(out.size() * d);
    for (std::size_t base : out)
      for (std::size_t i = 0; i < d; ++i) next.push_back(base + i * strides[p]);
    out = std::move(next);
  }
  return out;
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw ShapeError(os.str());
  }
}

}  // namespace

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix identity(std::size_t d) { return Matrix::Identity(d, d); }

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

bool is_isometry(const Matrix& v, double tolerance) {
  return max_abs(v.adjoint() * v - identity(v.cols())) <= tolerance;
}

void validate_density(const SystemLayout& layout, const Matrix& matrix) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  if (matrix.rows() != d || matrix.cols() != d) {
    std::ostringstream os;
    os << "matrix is " << matrix.rows() << "x" << matrix.cols() << " but layout "
       << to_string(layout) << " has dimension " << d;
    throw ShapeError(os.str());
  }
  if (!matrix.allFinite()) throw InvariantError("matrix has non-finite entries");
  const double herm = max_abs(matrix - matrix.adjoint());
  if (herm > tol::kHermitian) {
    std::ostringstream os;
    os << "not Hermitian: max |M - M^dagger| = " << herm << " > " << tol::kHermitian;
    throw InvariantError(os.str());
  }
  const Complex tr = matrix.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol::kTrace) {
    std::ostringstream os;
    os << "trace " << tr.real() << (tr.imag() < 0 ? "-" : "+") << std::abs(tr.imag())
       << "i differs from 1 by more than " << tol::kTrace;
    throw InvariantError(os.str());
  }
  const double lmin = eigvalsh(matrix)(0);
  if (lmin < -tol::kPsd) {
    std::ostringstream os;
    os << "not positive semidefinite: minimum eigenvalue " << lmin << " < " << -tol::kPsd;
    throw InvariantError(os.str());
  }
}

DensityOperator::DensityOperator(SystemLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  validate_density(layout_, matrix_);
}

DensityOperator::DensityOperator(SystemLayout layout, Matrix matrix, bool)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {}

DensityOperator DensityOperator::unchecked(SystemLayout layout, Matrix matrix) {
  return DensityOperator(std::move(layout), std::move(matrix), true);
}

DensityOperator DensityOperator::relabeled(const LabelList& labels) const {
  if (labels.size() != layout_.size())
    throw LabelError("relabel: expected " + std::to_string(layout_.size()) + " labels");
  std::vector<Subsystem> systems;
  for (std::size_t i = 0; i < labels.size(); ++i) systems.push_back({labels[i], layout_.systems()[i].dim});
  return unchecked(SystemLayout(std::move(systems)), matrix_);
}

PureStateVector::PureStateVector(SystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim())
    throw ShapeError("state vector length " + std::to_string(amplitudes_.size()) +
                     " does not match layout " + to_string(layout_));
  const double n = amplitudes_.norm();
  if (std::abs(n - 1.0) > tol::kUnitNorm)
    throw InvariantError("state vector norm " + std::to_string(n) + " is not 1");
}

DensityOperator PureStateVector::density() const {
  return DensityOperator::unchecked(layout_, amplitudes_ * amplitudes_.adjoint());
}

Isometry::Isometry(SystemLayout input, SystemLayout output, Matrix matrix)
    : input_(std::move(input)), output_(std::move(output)), matrix_(std::move(matrix)) {
  if (static_cast<std::size_t>(matrix_.rows()) != output_.total_dim() ||
      static_cast<std::size_t>(matrix_.cols()) != input_.total_dim())
    throw ShapeError("isometry matrix shape does not match its input/output layouts");
  if (!is_isometry(matrix_)) throw InvariantError("V^dagger V differs from the identity");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityOperator kron(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::unchecked(concat(a.layout(), b.layout()), kron(a.matrix(), b.matrix()));
}

PureStateVector kron(const PureStateVector& a, const PureStateVector& b) {
  return PureStateVector(concat(a.layout(), b.layout()), kron(a.amplitudes(), b.amplitudes()));
}

Matrix partial_trace(const Matrix& matrix, const SystemLayout& layout, const LabelList& keep) {
  const LabelList kept = layout.restrict_to(keep).labels();
  const LabelList traced = layout.complement(kept);
  const auto ko = offsets(layout, kept);
  const auto to = offsets(layout, traced);
  const auto n = static_cast<Eigen::Index>(ko.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      Complex acc = 0.0;
      for (std::size_t t : to) acc += matrix(ko[a] + t, ko[b] + t);
      out(a, b) = acc;
    }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const LabelList& keep) {
  if (keep.empty()) throw LabelError("partial_trace: keep set must be nonempty");
  return DensityOperator::unchecked(rho.layout().restrict_to(keep),
                                    partial_trace(rho.matrix(), rho.layout(), keep));
}

DensityOperator trace_out(const DensityOperator& rho, const LabelList& discard) {
  return partial_trace(rho, rho.layout().complement(discard));
}

std::vector<std::size_t> permutation_map(const SystemLayout& layout, const LabelList& new_order) {
  if (new_order.size() != layout.size())
    throw LabelError("permutation must list every system exactly once");
  layout.restrict_to(new_order);  // rejects unknown or repeated labels
  return offsets(layout, new_order);
}

DensityOperator permute_systems(const DensityOperator& rho, const LabelList& new_order) {
  const auto map = permutation_map(rho.layout(), new_order);
  const auto n = static_cast<Eigen::Index>(map.size());
  Matrix out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) out(a, b) = rho.matrix()(map[a], map[b]);
  return DensityOperator::unchecked(rho.layout().select(new_order), std::move(out));
}

PureStateVector permute_systems(const PureStateVector& psi, const LabelList& new_order) {
  const auto map = permutation_map(psi.layout(), new_order);
  Vector out(map.size());
  for (std::size_t a = 0; a < map.size(); ++a) out(a) = psi.amplitudes()(map[a]);
  return PureStateVector(psi.layout().select(new_order), std::move(out));
}

Eigensystem eigh(const Matrix& h) {
  require_square(h, "eigh");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector eigvalsh(const Matrix& h) {
  require_square(h, "eigvalsh");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Matrix psd_sqrt(const Matrix& h) {
  return spectral_apply(h, [](double x) { return x > tol::kRankCutoff ? std::sqrt(x) : 0.0; });
}

std::size_t numerical_rank(const Matrix& h) {
  const RealVector ev = eigvalsh(h);
  return static_cast<std::size_t>((ev.array() > tol::kRankCutoff).count());
}

PureStateVector purify(const DensityOperator& rho, const std::string& reference_label) {
  const Eigensystem es = eigh(rho.matrix());
  const auto d = static_cast<Eigen::Index>(rho.dim());
  std::vector<Eigen::Index> support;
  // Descending order puts the dominant component at |0>_R.
  for (Eigen::Index k = d; k-- > 0;)
    if (es.values(k) > tol::kRankCutoff) support.push_back(k);
  const auto r = static_cast<Eigen::Index>(support.size());
  Vector amps(r * d);
  for (Eigen::Index i = 0; i < r; ++i)
    amps.segment(i * d, d) = std::sqrt(es.values(support[i])) * es.vectors.col(support[i]);
  // Discarded eigenvalues are at most kRankCutoff each.
  amps /= amps.norm();
  SystemLayout ref{{reference_label, static_cast<std::size_t>(r)}};
  return PureStateVector(concat(ref, rho.layout()), std::move(amps));
}

DensityOperator apply_stinespring(const DensityOperator& rho, const Isometry& v,
                                  const LabelList& acting, const LabelList& discard) {
  const SystemLayout acting_layout = rho.layout().select(acting);
  if (acting_layout.dims() != v.input().dims())
    throw ShapeError("isometry input " + to_string(v.input()) + " does not match acting systems " +
                     to_string(acting_layout));
  const LabelList rest = rho.layout().complement(acting);
  LabelList order = rest;
  order.insert(order.end(), acting.begin(), acting.end());
  const DensityOperator arranged = permute_systems(rho, order);

  const SystemLayout out_layout = concat(rho.layout().select(rest), v.output());
  const Matrix w = kron(identity(rho.layout().dim_of(rest)), v.matrix());
  Matrix out = w * arranged.matrix() * w.adjoint();
  DensityOperator full = DensityOperator::unchecked(out_layout, hermitian_part(out));
  if (discard.empty()) return full;
  return trace_out(full, discard);
}

DensityOperator basis_state(const std::string& label, std::size_t dim, std::size_t index) {
  if (index >= dim) throw DomainError("basis index out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityOperator::unchecked(SystemLayout{{label, dim}}, std::move(m));
}

DensityOperator maximally_mixed(const SystemLayout& layout) {
  const std::size_t d = layout.total_dim();
  return DensityOperator::unchecked(layout, identity(d) / static_cast<double>(d));
}

}  // namespace privsq
