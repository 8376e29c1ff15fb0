#include "privsq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "privsq/entropy.hpp"
#include "privsq/metric.hpp"
#include "privsq/private_states.hpp"
#include "privsq/squashed.hpp"

namespace privsq {

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

namespace {

// Running maximum of residuals for one check.
class Tally {
 public:
  Tally(std::string identity, double tolerance) : identity_(std::move(identity)), tolerance_(tolerance) {}

  void add(double residual) {
    max_ = std::isnan(residual) ? std::numeric_limits<double>::infinity() : std::max(max_, residual);
    ++count_;
  }

  IdentityCheck finish(const std::optional<double>& override_tol) const {
    const double t = override_tol.value_or(tolerance_);
    return {identity_, count_, max_, t, count_ > 0 && max_ <= t};
  }

 private:
  std::string identity_;
  double tolerance_;
  double max_ = -std::numeric_limits<double>::infinity();
  std::size_t count_ = 0;
};

SystemLayout qubits(const LabelList& labels) {
  std::vector<Subsystem> s;
  for (const auto& l : labels) s.push_back({l, 2});
  return SystemLayout(s);
}

// Continuity term for a qubit-sized log term.
double qubit_bound(ContinuityKind kind, double eps) {
  ContinuityParams p;
  p.kind = kind;
  p.epsilon = eps;
  p.log_dim = 1.0;
  return continuity_bound(p);
}

DensityOperator any_rank(const SystemLayout& layout, Rng& rng) {
  return random_density(layout, 1 + rng.next_u64() % layout.total_dim(), rng);
}

SuiteResult lemmas(const SuiteOptions& o) {
  Rng rng(o.seed);
  Tally l1("Lemma 1: 2 log2 K = I(A;BB'|E) + I(A';B|AB'E)", 1e-7);
  Tally key_split("I(AA';BB'|E) = 2 log2 K + I(A';B'|AE)", 1e-7);
  const PrivateLabels two{key_labels(2), shield_labels(2), {kExtensionLabel}};
  for (std::size_t i = 0; i < o.instances; ++i) {
    const auto ext = random_private_extension(2, 2, {2, 2}, 2, rng);
    l1.add(lemma_residual(ext.state, IdentityKind::kL1, two));
    key_split.add(lemma_residual(ext.state, IdentityKind::kKeySplit, two));
  }
  Tally l2("Lemma 2 (m = 3)", 1e-6);
  Tally l3("Lemma 3 (m = 3)", 1e-6);
  const PrivateLabels three{key_labels(3), shield_labels(3), {kExtensionLabel}};
  const std::size_t multi = std::max<std::size_t>(1, o.instances / 4);
  for (std::size_t i = 0; i < multi; ++i) {
    const auto ext = random_private_extension(2, 3, {2, 2, 2}, 2, rng);
    l2.add(lemma_residual(ext.state, IdentityKind::kL2, three));
    l3.add(lemma_residual(ext.state, IdentityKind::kL3, three));
  }
  return {"lemmas", {l1.finish(o.tolerance), key_split.finish(o.tolerance), l2.finish(o.tolerance), l3.finish(o.tolerance)}};
}

SuiteResult ssa(const SuiteOptions& o) {
  Rng rng(o.seed);
  SuiteResult r{"ssa", {}};
  for (std::size_t mid : {2u, 3u}) {
    const SystemLayout l{{"A", 2}, {"B", mid}, {"E", 2}};
    Tally t("I(A;B|E) >= 0 on dims (2," + std::to_string(mid) + ",2)", 1e-9);
    for (std::size_t i = 0; i < o.instances; ++i) t.add(-cmi(any_rank(l, rng), {"A"}, {"B"}, {"E"}));
    r.checks.push_back(t.finish(o.tolerance));
  }
  return r;
}

SuiteResult chain(const SuiteOptions& o) {
  Rng rng(o.seed);
  Tally total("total-correlation chain rule (m = 3)", 1e-8);
  Tally dual("dual total-correlation chain rule (m = 3)", 1e-8);
  const SystemLayout l = qubits({"B", "A1", "A2", "A3", "E"});
  const std::vector<LabelList> merged{{"B", "A1"}, {"A2"}, {"A3"}};
  const std::vector<LabelList> split{{"A1"}, {"A2"}, {"A3"}};
  for (std::size_t i = 0; i < o.instances; ++i) {
    const auto rho = any_rank(l, rng);
    const double rhs_total =
        multi_info(rho, split, {"B", "E"}) + cmi(rho, {"B"}, {"A2"}, {"E"}) + cmi(rho, {"B"}, {"A3"}, {"E"});
    total.add(std::abs(multi_info(rho, merged, {"E"}) - rhs_total));
    const double rhs_dual = multi_info_dual(rho, split, {"B", "E"}) + cmi(rho, {"B"}, {"A2", "A3"}, {"E"});
    dual.add(std::abs(multi_info_dual(rho, merged, {"E"}) - rhs_dual));
  }
  return {"chain", {total.finish(o.tolerance), dual.finish(o.tolerance)}};
}

SuiteResult dual(const SuiteOptions& o) {
  Rng rng(o.seed);
  Tally t("I + dual I = sum_i I(A_i; rest | E), four qubit parties", 1e-8);
  const LabelList names{"A1", "A2", "A3", "A4"};
  const std::vector<LabelList> parties{{"A1"}, {"A2"}, {"A3"}, {"A4"}};
  const SystemLayout l = qubits(names);
  for (std::size_t i = 0; i < o.instances; ++i) {
    const auto rho = any_rank(l, rng);
    double rhs = 0.0;
    for (const auto& p : names) {
      LabelList rest;
      for (const auto& q : names)
        if (q != p) rest.push_back(q);
      rhs += cmi(rho, {p}, rest);
    }
    t.add(std::abs(multi_info(rho, parties) + multi_info_dual(rho, parties) - rhs));
  }
  return {"dual", {t.finish(o.tolerance)}};
}

SuiteResult fvg(const SuiteOptions& o) {
  Rng rng(o.seed);
  SuiteResult r{"fvg", {}};
  for (std::size_t d : {2u, 3u, 4u}) {
    const SystemLayout l{{"A", d}};
    Tally lower("1 - sqrt(F) <= T, d = " + std::to_string(d), 1e-9);
    Tally upper("T <= sqrt(1 - F), d = " + std::to_string(d), 1e-9);
    for (std::size_t i = 0; i < o.instances; ++i) {
      const auto rho = any_rank(l, rng);
      const auto sigma = any_rank(l, rng);
      const double f = fidelity(rho, sigma), t = trace_distance(rho, sigma);
      lower.add((1.0 - std::sqrt(f)) - t);
      upper.add(t - std::sqrt(1.0 - f));
    }
    r.checks.push_back(lower.finish(o.tolerance));
    r.checks.push_back(upper.finish(o.tolerance));
  }
  return r;
}

SuiteResult continuity(const SuiteOptions& o) {
  Rng rng(o.seed);
  Tally afw("|dH(A|B)| <= AFW bound", 1e-9);
  Tally cc("|dI(A;B|E)| <= CMI continuity bound", 1e-9);
  const SystemLayout l{{"A", 2}, {"B", 2}, {"E", 2}};
  for (std::size_t i = 0; i < o.instances; ++i) {
    const auto rho = any_rank(l, rng);
    const auto tau = any_rank(l, rng);
    // Mixing toward tau covers the full range of trace distances.
    const double t = rng.uniform();
    const auto sigma = DensityOperator::unchecked(l, (1 - t) * rho.matrix() + t * tau.matrix());
    const double eps = trace_distance(rho, sigma);
    afw.add(std::abs(cond_entropy(rho, {"A"}, {"B"}) - cond_entropy(sigma, {"A"}, {"B"})) -
            qubit_bound(ContinuityKind::kAfw, eps));
    cc.add(std::abs(cmi(rho, {"A"}, {"B"}, {"E"}) - cmi(sigma, {"A"}, {"B"}, {"E"})) -
           qubit_bound(ContinuityKind::kCmiCont, eps));
  }
  return {"continuity", {afw.finish(o.tolerance), cc.finish(o.tolerance)}};
}

SuiteResult thm1(const SuiteOptions& o) {
  Rng rng(o.seed);
  SuiteResult r{"thm1", {}};
  const LabelList a{"A1", "A1'"}, b{"A2", "A2'"};
  const std::size_t per_p = std::max<std::size_t>(1, o.instances / 10);
  for (double p : {0.01, 0.05, 0.1}) {
    Tally t("2 log2 K <= I(AA';BB'|E) + 2 f1(sqrt(eps), K), p = " + std::to_string(p).substr(0, 4), 1e-6);
    for (std::size_t i = 0; i < per_p; ++i) {
      const auto gamma = private_state(random_private_spec(2, 2, {2, 2}, rng));
      const auto omega = depolarize(gamma, p);
      const double eps = std::max(0.0, 1.0 - fidelity(gamma, omega));
      const double f1 = qubit_bound(ContinuityKind::kF1, std::sqrt(eps));
      const auto ansatz = SquashingAnsatz::random(16, 2, 8, 0.5, rng.next_u64());
      const auto ext = extend_by_squashing(omega, ansatz);
      t.add(2.0 - (cmi(ext, a, b, {kExtensionLabel}) + 2.0 * f1));
    }
    r.checks.push_back(t.finish(o.tolerance));
  }
  Tally rate("key rate bound vs direct formula (esq 1, eps 0.01, n 100)", 1e-12);
  const double se = 0.1;
  const double direct = 1.0 / (1 - 2 * se) + 2 * (1 + se) * binary_entropy(se / (1 + se)) / (100 * (1 - 2 * se));
  rate.add(std::abs(key_rate_bound(1.0, 0.01, 100) - direct));
  r.checks.push_back(rate.finish(o.tolerance));
  Tally reject("key rate bound rejects eps = 0.25", 0.0);
  bool threw = false;
  try {
    key_rate_bound(1.0, 0.25, 100);
  } catch (const DomainError&) {
    threw = true;
  }
  reject.add(threw ? 0.0 : 1.0);
  r.checks.push_back(reject.finish(std::nullopt));
  return r;
}

using SuiteFn = std::function<SuiteResult(const SuiteOptions&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"lemmas", lemmas}, {"ssa", ssa}, {"chain", chain}, {"dual", dual},
      {"fvg", fvg},       {"continuity", continuity},     {"thm1", thm1}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  if (options.instances < 1) throw DomainError("verify: instances must be positive");
  for (const auto& [n, fn] : registry())
    if (n == name) return fn(options);
  throw DomainError("verify: unknown suite '" + name + "'");
}

}  // namespace privsq
