#include <doctest.h>

#include <cmath>

#include "privsq/entropy.hpp"
#include "privsq/metric.hpp"
#include "privsq/private_states.hpp"

using namespace privsq;

namespace {

PrivateStateSpec trivial_spec(std::size_t k, const DensityOperator& shield) {
  return PrivateStateSpec{k, 2, shield.layout().dims(), shield,
                          std::vector<Matrix>(k * k, identity(shield.dim()))};
}

DensityOperator shield_zero() { return kron(basis_state("A1'", 2, 0), basis_state("A2'", 2, 0)); }

const LabelList kKeys{"A1", "A2"};
const LabelList kShields{"A1'", "A2'"};

}  // namespace

TEST_CASE("maximally entangled state") {
  auto phi = max_entangled(2, "A", "B");
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool corr = (i == 0 || i == 3) && (j == 0 || j == 3);
      CHECK(std::abs(phi.matrix()(i, j) - Complex(corr ? 0.5 : 0.0)) < 1e-15);
    }
  auto marg = partial_trace(max_entangled(3), {"A"});
  CHECK(max_abs(marg.matrix() - identity(3) / 3.0) < 1e-14);
  CHECK(vn_entropy(marg) == doctest::Approx(std::log2(3.0)));
  CHECK_THROWS(max_entangled(1));
}

TEST_CASE("GHZ state") {
  CHECK(max_abs(ghz(3, 2, {"A", "B"}).matrix() - max_entangled(3).matrix()) < 1e-15);
  auto g = ghz(2, 3);
  CHECK(g.layout().labels() == LabelList{"A1", "A2", "A3"});
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const bool corr = (i == 0 || i == 7) && (j == 0 || j == 7);
      CHECK(std::abs(g.matrix()(i, j) - Complex(corr ? 0.5 : 0.0)) < 1e-15);
    }
  CHECK(max_abs(partial_trace(g, {"A2"}).matrix() - identity(2) / 2.0) < 1e-15);
  CHECK_THROWS(ghz(2, 1));
}

TEST_CASE("twisting unitary") {
  auto spec = trivial_spec(2, shield_zero());
  CHECK(max_abs(twisting_unitary(spec) - identity(16)) < 1e-15);

  Rng rng(31);
  auto rs = random_private_spec(2, 2, {2, 2}, rng);
  Matrix u = twisting_unitary(rs);
  CHECK(max_abs(u.adjoint() * u - identity(16)) < 1e-10);
  // Block application on basis probes |i, j> ⊗ |s>.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t s = 0; s < 4; ++s) {
        Vector probe = Vector::Zero(16);
        probe((i * 2 + j) * 4 + s) = 1.0;
        Vector want = Vector::Zero(16);
        want.segment((i * 2 + j) * 4, 4) = rs.controls[i * 2 + j].col(s);
        CHECK(max_abs(u * probe - want) < 1e-14);
      }

  auto missing = rs;
  missing.controls.pop_back();
  CHECK_THROWS(twisting_unitary(missing));
  auto nonunitary = rs;
  nonunitary.controls[0] *= 2.0;
  CHECK_THROWS(nonunitary.validate());
}

TEST_CASE("private state construction") {
  auto sigma = shield_zero();
  auto spec = trivial_spec(2, sigma);
  auto gamma = private_state(spec);
  CHECK(gamma.layout().labels() == LabelList{"A1", "A2", "A1'", "A2'"});
  CHECK(max_abs(gamma.matrix() - kron(ghz(2, 2), sigma).matrix()) < 1e-15);
  CHECK(privacy_check(gamma, 2, kKeys, kShields) < 1e-10);

  Rng rng(32);
  auto rs = random_private_spec(2, 2, {2, 2}, rng);
  auto g = private_state(rs);
  RealVector a = eigvalsh(g.matrix());
  RealVector b = eigvalsh(kron(ghz(2, 2), rs.shield_state).matrix());
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(privacy_check(g, 2, kKeys, kShields) < 1e-9);

  // Measuring the keys gives the uniform perfectly correlated distribution.
  auto keys = partial_trace(dephase(g, kKeys), kKeys);
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = want(3, 3) = 0.5;
  CHECK(max_abs(keys.matrix() - want) < 1e-12);
}

TEST_CASE("trivial-shield maximally entangled state is private") {
  auto spec = trivial_spec(2, kron(basis_state("A1'", 1, 0), basis_state("A2'", 1, 0)));
  CHECK(privacy_check(private_state(spec), 2, kKeys, kShields) < 1e-10);
}

TEST_CASE("private states with random controls pass the privacy check") {
  Rng rng(33);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = 2 + i % 2;
    auto spec = random_private_spec(k, 2, {2, 2}, rng, 1 + i % 4);
    worst = std::max(worst, privacy_check(private_state(spec), k, kKeys, kShields));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("privacy deviation does not depend on the purification") {
  Rng rng(34);
  auto noisy = depolarize(private_state(random_private_spec(2, 2, {2, 2}, rng)), 0.1);
  auto psi = purify(noisy, "R");
  const double base = privacy_deviation(psi, 2, kKeys, kShields);
  const std::size_t r = psi.layout().dim("R");
  for (int t = 0; t < 5; ++t) {
    // Embed R isometrically into a larger reference R2.
    const std::size_t r2 = r + 1 + t;
    Matrix v = haar_unitary(r2, rng).leftCols(r);
    Matrix rest = Eigen::Map<const Matrix>(psi.amplitudes().data(), 16, r);
    Matrix moved = rest * v.transpose();
    Vector amps = Eigen::Map<const Vector>(moved.data(), moved.size());
    PureStateVector alt(concat(SystemLayout{{"R2", r2}}, noisy.layout()), amps);
    CHECK(std::abs(privacy_deviation(alt, 2, kKeys, kShields) - base) < 1e-10);
  }
}

TEST_CASE("depolarized private state deviates from privacy") {
  auto gamma = private_state(trivial_spec(2, shield_zero()));
  const double dev = privacy_check(depolarize(gamma, 0.2), 2, kKeys, kShields);
  CHECK(dev > 0.01);
  CHECK(std::abs(dev - 0.238278221853732) < 1e-9);
}

TEST_CASE("private state extensions") {
  Rng rng(35);
  auto spec = random_private_spec(2, 2, {2, 2}, rng);
  auto trivial_e = private_state_extension(spec, kron(spec.shield_state, basis_state("E", 1, 0)));
  CHECK(max_abs(trivial_e.matrix() - private_state(spec).matrix()) < 1e-12);

  auto ext = random_private_extension(2, 2, {2, 2}, 2, rng);
  CHECK(ext.state.layout().labels() == LabelList{"A1", "A2", "A1'", "A2'", "E"});
  CHECK(max_abs(trace_out(ext.state, {"E"}).matrix() - private_state(ext.spec).matrix()) < 1e-10);

  // The E-marginal conditioned on each key value is the same state.
  auto keyed = partial_trace(ext.state, {"A1", "E"});
  const Matrix g0 = 2.0 * keyed.matrix().block(0, 0, 2, 2);
  const Matrix g1 = 2.0 * keyed.matrix().block(2, 2, 2, 2);
  CHECK(max_abs(g0 - g1) < 1e-10);
  CHECK(max_abs(g0 - partial_trace(ext.shield_extension, {"E"}).matrix()) < 1e-10);

  auto wrong = kron(maximally_mixed(spec.shield_layout()), basis_state("E", 2, 0));
  CHECK_THROWS_AS(private_state_extension(spec, wrong), InvariantError);
}

TEST_CASE("approximate private states") {
  Rng rng(36);
  auto spec = random_private_spec(2, 2, {2, 2}, rng);
  auto zero = approx_private_state(spec, 0.0, 5);
  CHECK(std::abs(zero.epsilon) < 1e-9);
  CHECK(max_abs(zero.state.matrix() - private_state(spec).matrix()) < 1e-14);
  double prev = -1.0;
  for (int i = 0; i <= 5; ++i) {
    auto a = approx_private_state(spec, 0.1 * i, 5);
    CHECK_NOTHROW(validate_density(a.state.layout(), a.state.matrix()));
    CHECK(a.epsilon >= prev - 1e-12);
    prev = a.epsilon;
  }
  CHECK(prev > 0.0);
}

TEST_CASE("multipartite private states") {
  Rng rng(37);
  auto spec = random_private_spec(2, 3, {2, 1, 2}, rng);
  CHECK(spec.controls.size() == 8);
  auto g = private_state(spec);
  CHECK(g.layout().labels() == LabelList{"A1", "A2", "A3", "A1'", "A2'", "A3'"});
  CHECK(privacy_check(g, 2, key_labels(3), shield_labels(3)) < 1e-9);
}
