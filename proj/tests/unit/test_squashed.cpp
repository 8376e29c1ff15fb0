#include <doctest.h>

#include <cmath>

#include "privsq/metric.hpp"
#include "privsq/private_states.hpp"
#include "privsq/squashed.hpp"

using namespace privsq;

namespace {

OptimizerConfig small_cfg(std::size_t restarts = 2, std::size_t iterations = 60) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.max_iterations = iterations;
  cfg.seed = 3;
  return cfg;
}

const Partition kAB{{{"A"}, {"B"}}, {}};

DensityOperator classical_correlated() {
  return dephase(max_entangled(2, "A", "B"), {"A"});
}

}  // namespace

TEST_CASE("optimizer minimizes a quadratic and is deterministic") {
  const Objective f = [](const RealVector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += (i + 1) * (x(i) - 0.5 * i) * (x(i) - 0.5 * i);
    return s;
  };
  OptimizerConfig cfg;
  cfg.restarts = 3;
  cfg.max_iterations = 200;
  cfg.tolerance = 1e-12;
  auto r = minimize(f, 4, cfg);
  CHECK(r.value < 1e-8);
  CHECK(r.diagnostics.restarts.size() == 3);
  cfg.parallel = false;
  auto s = minimize(f, 4, cfg);
  CHECK(s.value == r.value);
  CHECK((s.x - r.x).norm() == 0.0);
  CHECK(r.diagnostics.restarts[1].seed == cfg.seed + 1);
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("optimizer reports failure when the objective is never finite") {
  const Objective f = [](const RealVector&) { return std::nan(""); };
  OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 5;
  auto r = minimize(f, 2, cfg);
  CHECK(r.diagnostics.failed);
}

TEST_CASE("squashing ansatz produces isometries") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto a = SquashingAnsatz::random(3, 2, 2, 1.0, seed);
    CHECK(is_isometry(a.isometry(), 1e-9));
  }
  auto id = SquashingAnsatz::identity(2, 2, 1).isometry();
  CHECK(max_abs(id - identity(2)) < 1e-14);
  CHECK_THROWS_AS(SquashingAnsatz::identity(5, 2, 2), ShapeError);
}

TEST_CASE("squashed extensions recover the state") {
  Rng rng(41);
  auto rho = random_density(SystemLayout{{"A", 2}, {"B", 2}}, 4, rng);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto a = SquashingAnsatz::random(4, 2, 3, 1.0, seed);
    auto omega = extend_by_squashing(rho, a);
    CHECK(omega.layout().labels() == LabelList{"A", "B", "E"});
    CHECK(max_abs(trace_out(omega, {"E"}).matrix() - rho.matrix()) < 1e-9);
    CHECK(cmi(omega, {"A"}, {"B"}, {"E"}) >= -1e-9);
  }
  // Without squashing the extension is a purification.
  auto pur = extend_by_squashing(rho, SquashingAnsatz::identity(4, 4, 1));
  CHECK(numerical_rank(pur.matrix()) == 1);
  CHECK((eigvalsh(partial_trace(pur, {"E"}).matrix()) - eigvalsh(rho.matrix())).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("pure input gives a product extension") {
  auto phi = max_entangled(2, "A", "B");
  auto omega = extend_by_squashing(phi, SquashingAnsatz::random(1, 2, 2, 1.0, 4));
  CHECK(std::abs(cmi(omega, {"A"}, {"B"}, {"E"}) - cmi(phi, {"A"}, {"B"})) < 1e-10);
  CHECK(max_abs(omega.matrix() - kron(phi, partial_trace(omega, {"E"})).matrix()) < 1e-10);
}

TEST_CASE("bipartite squashed entanglement anchors") {
  auto phi = esq_upper(max_entangled(2, "A", "B"), kAB, {}, small_cfg());
  CHECK(std::abs(phi.value - 1.0) < 1e-6);
  CHECK(phi.ok);
  auto prod = esq_upper(kron(basis_state("A", 2, 0), basis_state("B", 2, 1)), kAB, {}, small_cfg());
  CHECK(std::abs(prod.value) < 1e-8);
  auto cl = esq_upper(classical_correlated(), kAB, {2, 0}, small_cfg(8, 200));
  CHECK(cl.value <= 0.01);
  CHECK(cl.d_e == 2);
  CHECK(cl.d_f == 2);
}

TEST_CASE("multipartite squashed entanglement anchors") {
  const Partition three{{{"A1"}, {"A2"}, {"A3"}}, {}};
  // Pure GHZ: every extension is a product, so both flavors equal half of 3.
  auto g = ghz(2, 3);
  CHECK(std::abs(esq_multi_upper(g, three, MultiFlavor::kTotal, {}, small_cfg()).value - 1.5) < 1e-6);
  CHECK(std::abs(esq_multi_upper(g, three, MultiFlavor::kDual, {}, small_cfg()).value - 1.5) < 1e-6);
  auto prod = kron(kron(basis_state("A1", 2, 0), basis_state("A2", 2, 1)), basis_state("A3", 2, 0));
  CHECK(std::abs(esq_multi_upper(prod, three, MultiFlavor::kTotal, {}, small_cfg()).value) < 1e-8);
  CHECK(std::abs(esq_multi_upper(prod, three, MultiFlavor::kDual, {}, small_cfg()).value) < 1e-8);
}

TEST_CASE("esq rejects a conditioning group and a wrong party count") {
  auto rho = random_density(SystemLayout{{"A", 2}, {"B", 2}, {"C", 2}}, 2, 1);
  CHECK_THROWS_AS(esq_upper(rho, Partition{{{"A"}, {"B"}}, {"C"}}, {}, small_cfg()), LabelError);
  CHECK_THROWS_AS(esq_upper(rho, Partition{{{"A"}, {"B"}, {"C"}}, {}}, {}, small_cfg()), LabelError);
}

TEST_CASE("esq is deterministic across parallel and serial execution") {
  auto rho = random_density(SystemLayout{{"A", 2}, {"B", 2}}, 2, 7);
  auto cfg = small_cfg(3, 20);
  auto a = esq_upper(rho, kAB, {}, cfg);
  cfg.parallel = false;
  auto b = esq_upper(rho, kAB, {}, cfg);
  CHECK(a.value == b.value);
  CHECK((a.ansatz.params - b.ansatz.params).norm() == 0.0);
}

TEST_CASE("product ansatz gives subadditivity; discarding does not increase the value") {
  auto rho = random_density(SystemLayout{{"A", 2}, {"B", 2}}, 2, 51);
  auto sigma = random_density(SystemLayout{{"C", 2}, {"D", 2}}, 2, 52);
  auto cfg = small_cfg(2, 40);
  auto er = esq_upper(rho, kAB, {}, cfg);
  auto es = esq_upper(sigma, Partition{{{"C"}, {"D"}}, {}}, {}, cfg);
  auto w_r = extend_by_squashing(rho, er.ansatz, "E1");
  auto w_s = extend_by_squashing(sigma, es.ansatz, "E2");
  auto joint = kron(w_r, w_s);
  const double combined = 0.5 * cmi(joint, {"A", "C"}, {"B", "D"}, {"E1", "E2"});
  CHECK(combined <= er.value + es.value + 1e-6);

  // Tracing part of B with the same extension can only lower the CMI.
  auto big = random_density(SystemLayout{{"A", 2}, {"B1", 2}, {"B2", 2}}, 2, 53);
  auto eb = esq_upper(big, Partition{{{"A"}, {"B1", "B2"}}, {}}, {}, cfg);
  auto w = extend_by_squashing(big, eb.ansatz);
  CHECK(0.5 * cmi(w, {"A"}, {"B1"}, {"E"}) <= eb.value + 1e-6);
}

TEST_CASE("Lemma 1 and the CMI identity on private extensions") {
  Rng rng(61);
  const PrivateLabels labels{{"A1", "A2"}, {"A1'", "A2'"}, {"E"}};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto ext = random_private_extension(2, 2, {2, 2}, 2, rng);
    worst = std::max({worst, lemma_residual(ext.state, IdentityKind::kL1, labels),
                      lemma_residual(ext.state, IdentityKind::kKeySplit, labels)});
  }
  CHECK(worst < 1e-8);

  // Trivial twist with a product extension.
  const PrivateStateSpec spec{2, 2, {2, 2}, maximally_mixed(SystemLayout{{"A1'", 2}, {"A2'", 2}}),
                              std::vector<Matrix>(4, identity(4))};
  auto trivial = private_state_extension(spec, kron(spec.shield_state, basis_state("E", 2, 1)));
  for (auto kind : {IdentityKind::kL1, IdentityKind::kKeySplit, IdentityKind::kL2, IdentityKind::kL3})
    CHECK(lemma_residual(trivial, kind, labels) < 1e-10);
}

TEST_CASE("Lemmas 2 and 3 on three-party private extensions") {
  Rng rng(62);
  const PrivateLabels labels{key_labels(3), shield_labels(3), {"E"}};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    auto ext = random_private_extension(2, 3, {2, 2, 2}, 2, rng);
    worst = std::max({worst, lemma_residual(ext.state, IdentityKind::kL2, labels),
                      lemma_residual(ext.state, IdentityKind::kL3, labels)});
  }
  CHECK(worst < 1e-6);
  auto ext = random_private_extension(2, 3, {2, 2, 2}, 2, rng);
  CHECK_THROWS_AS(lemma_residual(ext.state, IdentityKind::kL1, labels), LabelError);
}

TEST_CASE("Theorem-1 chain holds for random ansatz extensions") {
  Rng rng(63);
  for (double p : {0.01, 0.05, 0.1}) {
    auto spec = random_private_spec(2, 2, {2, 2}, rng);
    auto gamma = private_state(spec);
    auto omega = depolarize(gamma, p);
    const double eps = 1.0 - fidelity(gamma, omega);
    ContinuityParams f1{ContinuityKind::kF1, std::sqrt(eps), 1.0};
    const double corr = continuity_bound(f1);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto a = SquashingAnsatz::random(16, 2, 8, 0.5, seed);
      auto w = extend_by_squashing(omega, a);
      const double c = cmi(w, {"A1", "A1'"}, {"A2", "A2'"}, {"E"});
      CHECK(2.0 <= c + 2 * corr + 1e-6);
    }
  }
}

TEST_CASE("key bound arithmetic") {
  auto b0 = key_bound_thm1(0.7, 0.0, 2, KeyBoundMode::kF1);
  CHECK(b0.rhs == 0.7);
  auto b1 = key_bound_thm1(0.7, 0.01, 2, KeyBoundMode::kF1);
  CHECK(std::abs(b1.rhs - (0.7 + 1.166893371227330)) < 1e-12);
  auto m = key_bound_thm1(1.0, 0.0, 2, KeyBoundMode::kF2, 3, 4, 4);
  CHECK(std::abs(m.rhs - 2.0 / 3.0) < 1e-12);
  CHECK_THROWS_AS(key_bound_thm1(1.0, 0.01, 2, KeyBoundMode::kF3, 3), DomainError);

  CHECK(key_rate_bound(0.8, 0.0, 7) == 0.8);
  CHECK(std::abs(key_rate_bound(1.0, 0.01, 100) - 1.262086167140342) < 1e-12);
  CHECK_THROWS_AS(key_rate_bound(1.0, 0.25, 100), DomainError);
  try {
    key_rate_bound(1.0, 0.25, 100);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("1 - 2 sqrt(eps) > 0") != std::string::npos);
  }
}

TEST_CASE("channel squashed entanglement heuristics") {
  auto cfg = small_cfg(2, 40);
  auto id = esq_channel_upper(identity_channel_dilation(), "B", {}, cfg);
  CHECK(id.heuristic);
  CHECK(std::abs(id.value - 1.0) < 1e-3);
  auto dep = esq_channel_upper(depolarizing_channel_dilation(1.0), "B", {2, 2}, cfg);
  CHECK(dep.value <= 0.01);
  auto rep = esq_channel_upper(replacement_channel_dilation(0), "B", {}, cfg);
  CHECK(rep.value <= 0.01);
  CHECK_THROWS_AS(depolarizing_channel_dilation(1.5), DomainError);
  CHECK(is_isometry(amplitude_damping_dilation(0.3).matrix()));
}
