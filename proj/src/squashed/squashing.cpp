#include <cmath>

#include "privsq/squashed.hpp"

namespace privsq {

std::size_t SquashingAnsatz::param_count(std::size_t d_e, std::size_t d_f) {
  const std::size_t n = d_e * d_f;
  return 2 * n * n;
}

SquashingAnsatz SquashingAnsatz::identity(std::size_t d_eprime, std::size_t d_e, std::size_t d_f) {
  SquashingAnsatz a{d_eprime, d_e, d_f, RealVector::Zero(param_count(d_e, d_f))};
  a.validate();
  return a;
}

SquashingAnsatz SquashingAnsatz::random(std::size_t d_eprime, std::size_t d_e, std::size_t d_f,
                                        double scale, std::uint64_t seed) {
  SquashingAnsatz a{d_eprime, d_e, d_f, random_parameters(param_count(d_e, d_f), scale, seed)};
  a.validate();
  return a;
}

void SquashingAnsatz::validate() const {
  if (d_eprime < 1 || d_e < 1 || d_f < 1) throw ShapeError("squashing ansatz: dimensions must be positive");
  if (d_e * d_f < d_eprime)
    throw ShapeError("squashing ansatz: d_E * d_F = " + std::to_string(d_e * d_f) +
                     " is smaller than the purifying dimension " + std::to_string(d_eprime));
  if (static_cast<std::size_t>(params.size()) != param_count(d_e, d_f))
    throw ShapeError("squashing ansatz: expected " + std::to_string(param_count(d_e, d_f)) +
                     " parameters, got " + std::to_string(params.size()));
}

Matrix SquashingAnsatz::isometry() const {
  validate();
  const auto n = static_cast<Eigen::Index>(d_e * d_f);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(params(i * n + j), params(n * n + i * n + j));
  // exp(A) = exp(-iH) with H = iA Hermitian.
  const Matrix h = Complex(0.0, 0.5) * (g - g.adjoint());
  const Eigensystem es = eigh(h);
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::exp(Complex(0.0, -es.values(k)));
  return es.vectors * phases.asDiagonal() * es.vectors.topRows(static_cast<Eigen::Index>(d_eprime)).adjoint();
}

SquashingProblem::SquashingProblem(SystemLayout state_layout, Matrix branches, std::string extension_label)
    : state_layout_(std::move(state_layout)),
      branches_(std::move(branches)),
      extension_label_(std::move(extension_label)) {
  if (static_cast<std::size_t>(branches_.rows()) != state_layout_.total_dim())
    throw ShapeError("squashing: branch vectors do not match the state layout");
  if (state_layout_.contains(extension_label_))
    throw LabelError("squashing: extension label '" + extension_label_ + "' already used by the state");
}

SquashingProblem SquashingProblem::from_state(const DensityOperator& rho, std::string extension_label) {
  const Eigensystem es = eigh(rho.matrix());
  const Eigen::Index d = es.values.size();
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = d; k-- > 0;)
    if (es.values(k) > tol::kRankCutoff) support.push_back(k);
  Matrix x(d, static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i)
    x.col(static_cast<Eigen::Index>(i)) = std::sqrt(es.values(support[i])) * es.vectors.col(support[i]);
  x /= x.norm();
  return SquashingProblem(rho.layout(), std::move(x), std::move(extension_label));
}

DensityOperator SquashingProblem::extend(const Matrix& isometry, std::size_t d_e, std::size_t d_f) const {
  const Eigen::Index n = isometry.rows();
  if (static_cast<std::size_t>(n) != d_e * d_f || isometry.cols() != branches_.cols())
    throw ShapeError("squashing: isometry shape does not match the purifying system");
  const Eigen::Index d = branches_.rows();
  // psi^T has rows (e, f) and columns a; regrouped it is f x (a, e).
  const Matrix psi_t = isometry * branches_.transpose();
  const Matrix m = Eigen::Map<const Matrix>(psi_t.data(), static_cast<Eigen::Index>(d_f),
                                            d * static_cast<Eigen::Index>(d_e))
                       .transpose();
  SystemLayout layout = concat(state_layout_, SystemLayout{{extension_label_, d_e}});
  return DensityOperator::unchecked(std::move(layout), hermitian_part(m * m.adjoint()));
}

DensityOperator SquashingProblem::extend(const SquashingAnsatz& ansatz) const {
  if (ansatz.d_eprime != purifying_dim())
    throw ShapeError("squashing: ansatz expects a purifying system of dimension " +
                     std::to_string(ansatz.d_eprime) + ", state has rank " + std::to_string(purifying_dim()));
  return extend(ansatz.isometry(), ansatz.d_e, ansatz.d_f);
}

DensityOperator extend_by_squashing(const DensityOperator& rho, const SquashingAnsatz& ansatz,
                                    const std::string& extension_label) {
  return SquashingProblem::from_state(rho, extension_label).extend(ansatz);
}

std::string to_string(MultiFlavor flavor) { return flavor == MultiFlavor::kTotal ? "I" : "I_dual"; }

namespace {

using ExtensionValue = std::function<double(const DensityOperator&)>;

EsqResult run_esq(const DensityOperator& rho, const Partition& partition, SquashDims dims,
                  const OptimizerConfig& cfg, const ExtensionValue& value) {
  partition.validate(rho.layout());
  if (!partition.conditioning.empty())
    throw LabelError("squashed entanglement: the partition must not carry a conditioning group");
  LabelList keep;
  for (const auto& p : partition.parties) keep.insert(keep.end(), p.begin(), p.end());
  const DensityOperator reduced = partial_trace(rho, keep);
  std::string e_label = "E";
  while (reduced.layout().contains(e_label)) e_label += "_";
  const SquashingProblem problem = SquashingProblem::from_state(reduced, e_label);

  const std::size_t d_eprime = problem.purifying_dim();
  const std::size_t d_e = dims.d_e ? dims.d_e : d_eprime;
  const std::size_t d_f = dims.d_f ? dims.d_f : d_eprime;
  SquashingAnsatz probe{d_eprime, d_e, d_f, RealVector::Zero(SquashingAnsatz::param_count(d_e, d_f))};
  probe.validate();

  const Objective objective = [&](const RealVector& x) {
    const SquashingAnsatz a{d_eprime, d_e, d_f, x};
    return 0.5 * value(problem.extend(a.isometry(), d_e, d_f));
  };
  MultiStartResult best = minimize(objective, probe.params.size(), cfg);

  EsqResult out;
  out.value = best.value;
  out.ansatz = SquashingAnsatz{d_eprime, d_e, d_f, best.x};
  out.d_eprime = d_eprime;
  out.d_e = d_e;
  out.d_f = d_f;
  out.diagnostics = std::move(best.diagnostics);
  out.ok = !out.diagnostics.failed;
  return out;
}

}  // namespace

EsqResult esq_upper(const DensityOperator& rho, const Partition& bipartition, SquashDims dims,
                    const OptimizerConfig& cfg) {
  if (bipartition.parties.size() != 2) throw LabelError("esq_upper: expected exactly two parties");
  const LabelList& a = bipartition.parties[0];
  const LabelList& b = bipartition.parties[1];
  return run_esq(rho, bipartition, dims, cfg, [&](const DensityOperator& omega) {
    const std::string& e = omega.layout().systems().back().label;
    return cmi(omega, a, b, {e});
  });
}

EsqResult esq_multi_upper(const DensityOperator& rho, const Partition& partition, MultiFlavor flavor,
                          SquashDims dims, const OptimizerConfig& cfg) {
  return run_esq(rho, partition, dims, cfg, [&](const DensityOperator& omega) {
    const LabelList e{omega.layout().systems().back().label};
    return flavor == MultiFlavor::kTotal ? multi_info(omega, partition.parties, e)
                                         : multi_info_dual(omega, partition.parties, e);
  });
}

}  // namespace privsq
