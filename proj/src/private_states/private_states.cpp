#include "privsq/private_states.hpp"

#include <cmath>

#include "privsq/metric.hpp"

namespace privsq {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

// Flat index of the key tuple (i, ..., i).
std::size_t diagonal_tuple(std::size_t i, std::size_t key_dim, std::size_t parties) {
  std::size_t t = 0;
  for (std::size_t p = 0; p < parties; ++p) t = t * key_dim + i;
  return t;
}

// Sum over the diagonal key tuples of (1/K) |ii..><jj..| ⊗ (U^i ⊗ I) sigma (U^j ⊗ I)^dagger.
Matrix twisted_state(const PrivateStateSpec& spec, const Matrix& sigma, std::size_t ext_dim) {
  const std::size_t k = spec.key_dim;
  const std::size_t d_keys = ipow(k, spec.parties);
  const auto d_rest = static_cast<Eigen::Index>(sigma.rows());
  std::vector<Matrix> twisted;
  twisted.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    twisted.push_back(kron(spec.controls[diagonal_tuple(i, k, spec.parties)], identity(ext_dim)));
  Matrix out = Matrix::Zero(d_keys * d_rest, d_keys * d_rest);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const auto ti = static_cast<Eigen::Index>(diagonal_tuple(i, k, spec.parties));
      const auto tj = static_cast<Eigen::Index>(diagonal_tuple(j, k, spec.parties));
      out.block(ti * d_rest, tj * d_rest, d_rest, d_rest) =
          twisted[i] * sigma * twisted[j].adjoint() / static_cast<double>(k);
    }
  return hermitian_part(out);
}

}  // namespace

std::string key_label(std::size_t party) { return "A" + std::to_string(party + 1); }
std::string shield_label(std::size_t party) { return "A" + std::to_string(party + 1) + "'"; }

LabelList key_labels(std::size_t parties) {
  LabelList out;
  for (std::size_t p = 0; p < parties; ++p) out.push_back(key_label(p));
  return out;
}

LabelList shield_labels(std::size_t parties) {
  LabelList out;
  for (std::size_t p = 0; p < parties; ++p) out.push_back(shield_label(p));
  return out;
}

SystemLayout PrivateStateSpec::key_layout() const {
  std::vector<Subsystem> s;
  for (std::size_t p = 0; p < parties; ++p) s.push_back({key_label(p), key_dim});
  return SystemLayout(std::move(s));
}

SystemLayout PrivateStateSpec::shield_layout() const {
  std::vector<Subsystem> s;
  for (std::size_t p = 0; p < shield_dims.size(); ++p) s.push_back({shield_label(p), shield_dims[p]});
  return SystemLayout(std::move(s));
}

SystemLayout PrivateStateSpec::layout() const { return concat(key_layout(), shield_layout()); }

std::size_t PrivateStateSpec::shield_dim() const { return shield_layout().total_dim(); }

void PrivateStateSpec::validate() const {
  if (key_dim < 2) throw DomainError("private state: key dimension must be >= 2");
  if (parties < 2) throw DomainError("private state: party count must be >= 2");
  if (shield_dims.size() != parties)
    throw ShapeError("private state: expected " + std::to_string(parties) + " shield dimensions");
  if (shield_state.layout() != shield_layout())
    throw ShapeError("private state: shield state layout " + to_string(shield_state.layout()) +
                     " differs from " + to_string(shield_layout()));
  const std::size_t tuples = ipow(key_dim, parties);
  if (controls.size() != tuples)
    throw DomainError("private state: missing control: have " + std::to_string(controls.size()) +
                      " of " + std::to_string(tuples) + " key tuples");
  const auto ds = static_cast<Eigen::Index>(shield_dim());
  for (std::size_t t = 0; t < tuples; ++t) {
    if (controls[t].rows() != ds || controls[t].cols() != ds)
      throw ShapeError("private state: control " + std::to_string(t) + " has the wrong shape");
    if (!is_isometry(controls[t], tol::kIsometry))
      throw InvariantError("private state: control " + std::to_string(t) + " is not unitary");
  }
}

DensityOperator max_entangled(std::size_t key_dim, const std::string& a, const std::string& b) {
  return ghz(key_dim, 2, {a, b});
}

DensityOperator ghz(std::size_t key_dim, std::size_t parties, LabelList labels) {
  if (key_dim < 2) throw DomainError("ghz: key dimension must be >= 2");
  if (parties < 2) throw DomainError("ghz: party count must be >= 2");
  if (labels.empty()) labels = key_labels(parties);
  if (labels.size() != parties) throw LabelError("ghz: expected one label per party");
  std::vector<Subsystem> systems;
  for (const auto& l : labels) systems.push_back({l, key_dim});
  SystemLayout layout(std::move(systems));
  Matrix m = Matrix::Zero(layout.total_dim(), layout.total_dim());
  for (std::size_t i = 0; i < key_dim; ++i)
    for (std::size_t j = 0; j < key_dim; ++j)
      m(diagonal_tuple(i, key_dim, parties), diagonal_tuple(j, key_dim, parties)) =
          1.0 / static_cast<double>(key_dim);
  return DensityOperator::unchecked(std::move(layout), std::move(m));
}

Matrix twisting_unitary(const PrivateStateSpec& spec) {
  spec.validate();
  const auto ds = static_cast<Eigen::Index>(spec.shield_dim());
  const auto tuples = static_cast<Eigen::Index>(spec.controls.size());
  Matrix u = Matrix::Zero(tuples * ds, tuples * ds);
  for (Eigen::Index t = 0; t < tuples; ++t) u.block(t * ds, t * ds, ds, ds) = spec.controls[t];
  return u;
}

DensityOperator private_state(const PrivateStateSpec& spec) {
  spec.validate();
  return DensityOperator::unchecked(spec.layout(), twisted_state(spec, spec.shield_state.matrix(), 1));
}

DensityOperator private_state_extension(const PrivateStateSpec& spec,
                                        const DensityOperator& shield_extension) {
  spec.validate();
  const SystemLayout shields = spec.shield_layout();
  const auto& ext_systems = shield_extension.layout().systems();
  if (ext_systems.size() < shields.size() ||
      !std::equal(shields.systems().begin(), shields.systems().end(), ext_systems.begin()))
    throw ShapeError("private_state_extension: extension must list " + to_string(shields) +
                     " first, got " + to_string(shield_extension.layout()));
  const Matrix marginal = partial_trace(shield_extension.matrix(), shield_extension.layout(), shields.labels());
  const double mismatch = max_abs(marginal - spec.shield_state.matrix());
  if (mismatch > 1e-8)
    throw InvariantError("private_state_extension: marginal mismatch " + std::to_string(mismatch) +
                         " between extension and shield state");
  const std::size_t ext_dim = shield_extension.dim() / shields.total_dim();
  return DensityOperator::unchecked(concat(spec.key_layout(), shield_extension.layout()),
                                    twisted_state(spec, shield_extension.matrix(), ext_dim));
}

DensityOperator dephase(const DensityOperator& rho, const LabelList& labels) {
  const auto& layout = rho.layout();
  const auto strides = layout.strides();
  std::vector<std::size_t> pos;
  for (const auto& l : labels) pos.push_back(layout.position(l));
  auto digits_match = [&](std::size_t a, std::size_t b) {
    for (std::size_t p : pos) {
      const std::size_t d = layout.systems()[p].dim;
      if ((a / strides[p]) % d != (b / strides[p]) % d) return false;
    }
    return true;
  };
  Matrix m = rho.matrix();
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b)
      if (!digits_match(a, b)) m(a, b) = 0.0;
  return DensityOperator::unchecked(layout, std::move(m));
}

double privacy_deviation(const PureStateVector& purification, std::size_t key_dim,
                         const LabelList& keys, const LabelList& shields) {
  const auto& layout = purification.layout();
  for (const auto& k : keys)
    if (layout.dim(k) != key_dim)
      throw ShapeError("privacy_check: key system '" + k + "' does not have dimension " +
                       std::to_string(key_dim));
  LabelList ks = keys;
  ks.insert(ks.end(), shields.begin(), shields.end());
  const LabelList purifying = layout.complement(ks);

  LabelList order = keys;
  order.insert(order.end(), purifying.begin(), purifying.end());
  order.insert(order.end(), shields.begin(), shields.end());
  const PureStateVector arranged = permute_systems(purification, order);

  const auto d_keys = static_cast<Eigen::Index>(layout.dim_of(keys));
  const auto d_rest = static_cast<Eigen::Index>(layout.dim_of(purifying));
  const auto d_shield = static_cast<Eigen::Index>(layout.dim_of(shields));
  // Rows (keys, purifying), columns shields.
  const Matrix p = Eigen::Map<const Matrix>(arranged.amplitudes().data(), d_shield, d_keys * d_rest).transpose();

  // After measuring the keys only the diagonal key blocks survive.
  std::vector<Matrix> blocks;
  Matrix omega = Matrix::Zero(d_rest, d_rest);
  for (Eigen::Index k = 0; k < d_keys; ++k) {
    const auto rows = p.middleRows(k * d_rest, d_rest);
    blocks.push_back(rows * rows.adjoint());
    omega += blocks.back();
  }
  std::vector<bool> correlated(d_keys, false);
  for (std::size_t i = 0; i < key_dim; ++i) correlated[diagonal_tuple(i, key_dim, keys.size())] = true;

  double deviation = 0.0;
  for (Eigen::Index k = 0; k < d_keys; ++k) {
    const Matrix target = correlated[k] ? Matrix(omega / static_cast<double>(key_dim))
                                        : Matrix(Matrix::Zero(d_rest, d_rest));
    deviation += trace_distance(blocks[k], target);
  }
  return deviation;
}

double privacy_check(const DensityOperator& rho, std::size_t key_dim, const LabelList& keys,
                     const LabelList& shields) {
  std::string ref = "R";
  while (rho.layout().contains(ref)) ref += "_";
  return privacy_deviation(purify(rho, ref), key_dim, keys, shields);
}

ApproximatePrivateState approx_private_state(const PrivateStateSpec& spec, double noise,
                                             std::uint64_t seed) {
  if (!(noise >= 0.0 && noise <= 1.0)) throw DomainError("approx_private_state: noise outside [0, 1]");
  const DensityOperator gamma = private_state(spec);
  const DensityOperator tau = random_density(gamma.layout(), gamma.dim(), seed);
  DensityOperator omega = DensityOperator::unchecked(
      gamma.layout(), (1.0 - noise) * gamma.matrix() + noise * tau.matrix());
  const double eps = 1.0 - fidelity(gamma, omega);
  return {std::move(omega), eps};
}

DensityOperator depolarize(const DensityOperator& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarize: p outside [0, 1]");
  return DensityOperator::unchecked(
      rho.layout(), (1.0 - p) * rho.matrix() + p * identity(rho.dim()) / static_cast<double>(rho.dim()));
}

PrivateStateSpec random_private_spec(std::size_t key_dim, std::size_t parties,
                                     const std::vector<std::size_t>& shield_dims, Rng& rng,
                                     std::size_t shield_rank) {
  PrivateStateSpec spec{key_dim, parties, shield_dims, maximally_mixed(SystemLayout{}), {}};
  const SystemLayout shields = spec.shield_layout();
  spec.shield_state = random_density(shields, shield_rank ? shield_rank : shields.total_dim(), rng);
  const std::size_t tuples = ipow(key_dim, parties);
  for (std::size_t t = 0; t < tuples; ++t) spec.controls.push_back(haar_unitary(shields.total_dim(), rng));
  spec.validate();
  return spec;
}

PrivateExtension random_private_extension(std::size_t key_dim, std::size_t parties,
                                          const std::vector<std::size_t>& shield_dims,
                                          std::size_t ext_dim, Rng& rng) {
  PrivateStateSpec spec{key_dim, parties, shield_dims, maximally_mixed(SystemLayout{}), {}};
  const SystemLayout shields = spec.shield_layout();
  const SystemLayout with_e = concat(shields, SystemLayout{{kExtensionLabel, ext_dim}});
  DensityOperator sigma_e = random_density(with_e, with_e.total_dim(), rng);
  spec.shield_state = partial_trace(sigma_e, shields.labels());
  const std::size_t tuples = ipow(key_dim, parties);
  for (std::size_t t = 0; t < tuples; ++t) spec.controls.push_back(haar_unitary(shields.total_dim(), rng));
  DensityOperator state = private_state_extension(spec, sigma_e);
  return {std::move(spec), std::move(sigma_e), std::move(state)};
}

}  // namespace privsq
