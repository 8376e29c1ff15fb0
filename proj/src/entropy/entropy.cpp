#include "privsq/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace privsq {

namespace {

LabelList merge(std::initializer_list<const LabelList*> groups) {
  LabelList out;
  for (const auto* g : groups) out.insert(out.end(), g->begin(), g->end());
  return out;
}

void require_disjoint(std::initializer_list<const LabelList*> groups) {
  std::set<std::string> seen;
  for (const auto* g : groups)
    for (const auto& l : *g)
      if (!seen.insert(l).second) throw LabelError("group overlap: label '" + l + "' appears twice");
}

}  // namespace

void Partition::validate(const SystemLayout& layout) const {
  if (parties.size() < 2) throw LabelError("partition needs at least two parties");
  std::set<std::string> seen;
  auto visit = [&](const LabelList& g) {
    for (const auto& l : g) {
      layout.position(l);
      if (!seen.insert(l).second) throw LabelError("group overlap: label '" + l + "' appears twice");
    }
  };
  for (const auto& p : parties) {
    if (p.empty()) throw LabelError("partition party is empty");
    visit(p);
  }
  visit(conditioning);
}

double entropy_of_spectrum(const RealVector& eigenvalues) {
  double h = 0.0;
  for (double l : eigenvalues)
    if (l > tol::kRankCutoff) h -= l * std::log2(l);
  return h;
}

double matrix_entropy(const Matrix& rho) { return entropy_of_spectrum(eigvalsh(rho)); }

double vn_entropy(const DensityOperator& rho) { return matrix_entropy(rho.matrix()); }

double MarginalEntropies::operator()(const LabelList& labels) {
  if (labels.empty()) return 0.0;
  LabelList key = labels;
  std::sort(key.begin(), key.end());
  if (std::adjacent_find(key.begin(), key.end()) != key.end())
    throw LabelError("group overlap in entropy argument");
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const double h = matrix_entropy(partial_trace(rho_.matrix(), rho_.layout(), key));
  cache_.emplace(std::move(key), h);
  return h;
}

double MarginalEntropies::conditional(const LabelList& a, const LabelList& b) {
  require_disjoint({&a, &b});
  return (*this)(merge({&a, &b})) - (*this)(b);
}

double MarginalEntropies::mutual(const LabelList& a, const LabelList& b, const LabelList& e) {
  require_disjoint({&a, &b, &e});
  auto& h = *this;
  return h(merge({&a, &e})) + h(merge({&b, &e})) - h(e) - h(merge({&a, &b, &e}));
}

double cond_entropy(const DensityOperator& rho, const LabelList& a, const LabelList& b) {
  return MarginalEntropies(rho).conditional(a, b);
}

double cmi(const DensityOperator& rho, const LabelList& a, const LabelList& b, const LabelList& e) {
  return MarginalEntropies(rho).mutual(a, b, e);
}

namespace {

void require_parties(const DensityOperator& rho, const std::vector<LabelList>& parties,
                     const LabelList& e) {
  Partition{parties, e}.validate(rho.layout());
}

}  // namespace

double multi_info(const DensityOperator& rho, const std::vector<LabelList>& parties, const LabelList& e) {
  require_parties(rho, parties, e);
  MarginalEntropies h(rho);
  LabelList all;
  double sum = 0.0;
  for (const auto& p : parties) {
    sum += h.conditional(p, e);
    all.insert(all.end(), p.begin(), p.end());
  }
  return sum - h.conditional(all, e);
}

double multi_info_dual(const DensityOperator& rho, const std::vector<LabelList>& parties,
                       const LabelList& e) {
  require_parties(rho, parties, e);
  MarginalEntropies h(rho);
  LabelList all;
  for (const auto& p : parties) all.insert(all.end(), p.begin(), p.end());
  double value = h.conditional(all, e);
  for (std::size_t i = 0; i < parties.size(); ++i) {
    LabelList rest = e;
    for (std::size_t j = 0; j < parties.size(); ++j)
      if (j != i) rest.insert(rest.end(), parties[j].begin(), parties[j].end());
    value -= h.conditional(parties[i], rest);
  }
  return value;
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary_entropy: argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace privsq
