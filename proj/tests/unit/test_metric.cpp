#include <doctest.h>

#include <cmath>

#include "privsq/metric.hpp"
#include "privsq/private_states.hpp"

using namespace privsq;

TEST_CASE("fidelity and trace distance on simple pairs") {
  auto zero = basis_state("A", 2, 0);
  auto one = basis_state("A", 2, 1);
  auto mixed = maximally_mixed(SystemLayout{{"A", 2}});
  CHECK(fidelity(zero, zero) == doctest::Approx(1.0));
  CHECK(fidelity(zero, one) == doctest::Approx(0.0));
  CHECK(fidelity(zero, mixed) == doctest::Approx(0.5));
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0));
  CHECK(trace_distance(zero, mixed) == doctest::Approx(0.5));
  CHECK_THROWS_AS(trace_distance(zero, basis_state("B", 2, 0)), ShapeError);
}

TEST_CASE("Fuchs-van de Graaf inequalities hold on random pairs") {
  Rng rng(4);
  for (std::size_t d : {2u, 3u, 4u}) {
    SystemLayout l{{"A", d}};
    double worst = 1.0;
    for (int i = 0; i < 500; ++i) {
      const std::size_t r1 = 1 + rng.next_u64() % d, r2 = 1 + rng.next_u64() % d;
      auto rho = random_density(l, r1, rng);
      auto sigma = random_density(l, r2, rng);
      const double f = fidelity(rho, sigma), t = trace_distance(rho, sigma);
      worst = std::min({worst, t - (1 - std::sqrt(f)), std::sqrt(1 - f) - t});
    }
    CHECK(worst >= -1e-9);
  }
}

TEST_CASE("metrics are symmetric and unitarily invariant") {
  Rng rng(8);
  SystemLayout l{{"A", 3}};
  for (int i = 0; i < 50; ++i) {
    auto rho = random_density(l, 3, rng);
    auto sigma = random_density(l, 2, rng);
    CHECK(std::abs(fidelity(rho, sigma) - fidelity(sigma, rho)) < 1e-10);
    CHECK(std::abs(trace_distance(rho, sigma) - trace_distance(sigma, rho)) < 1e-10);
    Matrix u = haar_unitary(3, rng);
    Matrix ur = u * rho.matrix() * u.adjoint(), us = u * sigma.matrix() * u.adjoint();
    CHECK(std::abs(fidelity(ur, us) - fidelity(rho, sigma)) < 1e-10);
    CHECK(std::abs(trace_distance(ur, us) - trace_distance(rho, sigma)) < 1e-10);
  }
}

TEST_CASE("Uhlmann alignment attains the fidelity") {
  Rng rng(15);
  SystemLayout l{{"A", 3}};
  for (int i = 0; i < 30; ++i) {
    auto rho = random_density(l, 1 + i % 3, rng);
    auto sigma = random_density(l, 3, rng);
    auto pair = uhlmann_align(rho, sigma);
    const double overlap = std::norm(pair.sigma_purification.amplitudes().dot(pair.rho_purification.amplitudes()));
    CHECK(std::abs(overlap - fidelity(rho, sigma)) < 1e-9);
    CHECK(max_abs(trace_out(pair.rho_purification.density(), {"R"}).matrix() - rho.matrix()) < 1e-12);
    CHECK(max_abs(trace_out(pair.sigma_purification.density(), {"R"}).matrix() - sigma.matrix()) < 1e-12);
  }
}

TEST_CASE("matched extension preserves the marginal and the fidelity") {
  SUBCASE("identical marginal gives fidelity one") {
    auto rho = random_density(SystemLayout{{"A", 2}, {"B", 2}}, 4, 3);
    auto ext = matched_extension(rho, partial_trace(rho, {"A"}));
    CHECK(fidelity(rho, ext) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("maximally entangled with a mixed marginal") {
    auto phi = max_entangled(2, "A", "B");
    auto ext = matched_extension(phi, maximally_mixed(SystemLayout{{"A", 2}}));
    CHECK(std::abs(fidelity(phi, ext) - 1.0) < 1e-8);
  }
  SUBCASE("random instances") {
    Rng rng(21);
    for (int i = 0; i < 40; ++i) {
      auto rho = random_density(SystemLayout{{"A", 2}, {"B", 2}}, 1 + i % 4, rng);
      auto sigma_a = random_density(SystemLayout{{"A", 2}}, 1 + i % 2, rng);
      auto ext = matched_extension(rho, sigma_a);
      CHECK(max_abs(partial_trace(ext, {"A"}).matrix() - sigma_a.matrix()) < 1e-8);
      CHECK(std::abs(fidelity(rho, ext) - fidelity(partial_trace(rho, {"A"}), sigma_a)) < 1e-8);
    }
  }
}
