#include <cmath>

#include "privsq/squashed.hpp"

namespace privsq {

std::string to_string(IdentityKind kind) {
  switch (kind) {
    case IdentityKind::kL1: return "L1";
    case IdentityKind::kKeySplit: return "KEY_SPLIT";
    case IdentityKind::kL2: return "L2";
    case IdentityKind::kL3: return "L3";
  }
  return "?";
}

namespace {

LabelList join(std::initializer_list<LabelList> parts) {
  LabelList out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// A_{[m] \ excluded} restricted to indices >= first.
LabelList others(const LabelList& systems, std::initializer_list<std::size_t> excluded, std::size_t first = 0) {
  LabelList out;
  for (std::size_t j = first; j < systems.size(); ++j)
    if (std::find(excluded.begin(), excluded.end(), j) == excluded.end()) out.push_back(systems[j]);
  return out;
}

// 2 log K = I(A;BB'|E) + I(A';B|AB'E)
double lemma1(MarginalEntropies& h, const PrivateLabels& l, double log_k) {
  const LabelList a{l.keys[0]}, b{l.keys[1]}, ap{l.shields[0]}, bp{l.shields[1]};
  const double rhs = h.mutual(a, join({b, bp}), l.extension) + h.mutual(ap, b, join({a, bp, l.extension}));
  return 2.0 * log_k - rhs;
}

// I(AA';BB'|E) = 2 log K + I(A';B'|AE)
double key_split(MarginalEntropies& h, const PrivateLabels& l, double log_k) {
  const LabelList a{l.keys[0]}, b{l.keys[1]}, ap{l.shields[0]}, bp{l.shields[1]};
  return h.mutual(join({a, ap}), join({b, bp}), l.extension) -
         (2.0 * log_k + h.mutual(ap, bp, join({a, l.extension})));
}

// m log K = sum_{i>=2} H(A_i|A_i' E A_1) + sum_{i>=2} I(A_1; A_i A_i'|E)
//           - H(A_2..A_m | E A_1 A_1'..A_m')
double lemma2(MarginalEntropies& h, const PrivateLabels& l, double log_k) {
  const std::size_t m = l.keys.size();
  const LabelList& e = l.extension;
  const LabelList a1{l.keys[0]};
  double rhs = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    rhs += h.conditional({l.keys[i]}, join({{l.shields[i]}, e, a1}));
    rhs += h.mutual(a1, {l.keys[i], l.shields[i]}, e);
  }
  rhs -= h.conditional(others(l.keys, {}, 1), join({e, a1, l.shields}));
  return static_cast<double>(m) * log_k - rhs;
}

// m log K = H(A_2..A_m | E A_1 A_2'..A_m') - sum_{i>=2} H(A_i | E A_1 A'_[m])
//           + sum_{i>=2} I(A_i A_i'; A_[m]\{i,1} | E A_1 A'_[m]\{i})
//           + I(A_1; A_2 A_2' .. A_m A_m' | E)
double lemma3(MarginalEntropies& h, const PrivateLabels& l, double log_k) {
  const std::size_t m = l.keys.size();
  const LabelList& e = l.extension;
  const LabelList a1{l.keys[0]};
  double rhs = h.conditional(others(l.keys, {}, 1), join({e, a1, others(l.shields, {}, 1)}));
  LabelList rest_pairs;
  for (std::size_t i = 1; i < m; ++i) {
    rhs -= h.conditional({l.keys[i]}, join({e, a1, l.shields}));
    rhs += h.mutual({l.keys[i], l.shields[i]}, others(l.keys, {i, 0}), join({e, a1, others(l.shields, {i})}));
    rest_pairs.push_back(l.keys[i]);
    rest_pairs.push_back(l.shields[i]);
  }
  rhs += h.mutual(a1, rest_pairs, e);
  return static_cast<double>(m) * log_k - rhs;
}

}  // namespace

double lemma_residual(const DensityOperator& gamma_ext, IdentityKind kind, const PrivateLabels& labels) {
  const std::size_t m = labels.keys.size();
  if (m < 2 || labels.shields.size() != m)
    throw LabelError("lemma_residual: need one shield label per key label and at least two parties");
  if ((kind == IdentityKind::kL1 || kind == IdentityKind::kKeySplit) && m != 2)
    throw LabelError("lemma_residual: " + to_string(kind) + " is a bipartite identity");
  Partition groups{{}, labels.extension};
  for (std::size_t i = 0; i < m; ++i) groups.parties.push_back({labels.keys[i], labels.shields[i]});
  groups.validate(gamma_ext.layout());

  const std::size_t key_dim = gamma_ext.layout().dim(labels.keys[0]);
  for (const auto& k : labels.keys)
    if (gamma_ext.layout().dim(k) != key_dim) throw ShapeError("lemma_residual: key systems differ in dimension");
  const double log_k = std::log2(static_cast<double>(key_dim));

  MarginalEntropies h(gamma_ext);
  switch (kind) {
    case IdentityKind::kL1: return std::abs(lemma1(h, labels, log_k));
    case IdentityKind::kKeySplit: return std::abs(key_split(h, labels, log_k));
    case IdentityKind::kL2: return std::abs(lemma2(h, labels, log_k));
    case IdentityKind::kL3: return std::abs(lemma3(h, labels, log_k));
  }
  throw LabelError("lemma_residual: unknown identity");
}

}  // namespace privsq
