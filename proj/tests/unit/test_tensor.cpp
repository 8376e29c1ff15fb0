#include <doctest.h>

#include <cmath>

#include "privsq/tensor.hpp"
#include "support/oracles.hpp"

using namespace privsq;

namespace {

SystemLayout layout_of(const std::vector<std::size_t>& dims) {
  std::vector<Subsystem> s;
  for (std::size_t i = 0; i < dims.size(); ++i) s.push_back({"S" + std::to_string(i), dims[i]});
  return SystemLayout(s);
}

}  // namespace

TEST_CASE("layout indexing and label errors") {
  SystemLayout l{{"A", 2}, {"B", 3}, {"C", 4}};
  CHECK(l.total_dim() == 24);
  CHECK(l.strides() == std::vector<std::size_t>{12, 4, 1});
  CHECK(l.complement(LabelList{"B"}) == LabelList{"A", "C"});
  CHECK(l.restrict_to(LabelList{"C", "A"}).labels() == LabelList{"A", "C"});
  CHECK(l.select(LabelList{"C", "A"}).labels() == LabelList{"C", "A"});
  CHECK_THROWS_AS(l.position("Z"), LabelError);
  CHECK_THROWS_AS(concat(l, SystemLayout{{"A", 2}}), LabelError);
  CHECK_THROWS_AS((SystemLayout{{"A", 2}, {"A", 2}}), LabelError);
}

TEST_CASE("density operator invariants are enforced") {
  SystemLayout q{{"A", 2}};
  Matrix bad(2, 2);
  bad << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(DensityOperator(q, bad), InvariantError);
  Matrix trace2 = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator(q, trace2), InvariantError);
  Matrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityOperator(q, neg), InvariantError);
  CHECK_THROWS_AS(DensityOperator(q, Matrix::Identity(3, 3) / 3.0), ShapeError);
}

TEST_CASE("kron follows first-system-most-significant order") {
  auto a = basis_state("A", 2, 1);
  auto b = basis_state("B", 3, 2);
  auto ab = kron(a, b);
  CHECK(ab.layout().labels() == LabelList{"A", "B"});
  CHECK(std::abs(ab.matrix()(1 * 3 + 2, 1 * 3 + 2) - Complex(1.0)) < 1e-15);
}

TEST_CASE("partial trace agrees with the index-sum oracle on 2x3x2") {
  auto rho = random_density(layout_of({2, 3, 2}), 12, 11);
  const std::vector<std::size_t> dims{2, 3, 2};
  const std::vector<std::vector<bool>> keeps{{true, false, false}, {false, true, false}, {false, false, true},
                                             {true, true, false},  {true, false, true},  {false, true, true}};
  for (const auto& keep : keeps) {
    LabelList k;
    for (std::size_t i = 0; i < 3; ++i)
      if (keep[i]) k.push_back("S" + std::to_string(i));
    auto got = partial_trace(rho, k).matrix();
    auto want = oracle::index_sum_partial_trace(rho.matrix(), dims, keep);
    CHECK(max_abs(got - want) < 1e-12);
  }
}

TEST_CASE("partial trace agrees with the oracle on random shapes up to dim 24") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::size_t> dims;
    std::size_t total = 1;
    const std::size_t n = 1 + rng.next_u64() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t d = 1 + rng.next_u64() % 4;
      if (total * d > 24) break;
      dims.push_back(d);
      total *= d;
    }
    auto layout = layout_of(dims);
    auto rho = random_density(layout, total, rng);
    std::vector<bool> keep(dims.size());
    LabelList k;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      keep[i] = rng.uniform() < 0.5;
      if (keep[i]) k.push_back("S" + std::to_string(i));
    }
    if (k.empty()) {
      keep[0] = true;
      k.push_back("S0");
    }
    auto got = partial_trace(rho, k).matrix();
    CHECK(max_abs(got - oracle::index_sum_partial_trace(rho.matrix(), dims, keep)) < 1e-12);
  }
}

TEST_CASE("partial trace of a product state returns the factor") {
  auto a = random_density(SystemLayout{{"A", 3}}, 2, 1);
  auto b = random_density(SystemLayout{{"B", 2}}, 2, 2);
  auto ab = kron(a, b);
  CHECK(max_abs(partial_trace(ab, {"A"}).matrix() - a.matrix()) < 1e-14);
  CHECK(max_abs(trace_out(ab, {"A"}).matrix() - b.matrix()) < 1e-14);
}

TEST_CASE("permute_systems reorders and round-trips") {
  auto a = random_density(SystemLayout{{"A", 2}}, 2, 3);
  auto b = random_density(SystemLayout{{"B", 3}}, 3, 4);
  auto ba = permute_systems(kron(a, b), {"B", "A"});
  CHECK(max_abs(ba.matrix() - kron(b, a).matrix()) < 1e-14);
  auto back = permute_systems(ba, {"A", "B"});
  CHECK(max_abs(back.matrix() - kron(a, b).matrix()) < 1e-14);
}

TEST_CASE("eigh reconstructs and sorts ascending") {
  auto rho = random_density(SystemLayout{{"A", 5}}, 5, 9);
  auto es = eigh(rho.matrix());
  for (Eigen::Index i = 1; i < es.values.size(); ++i) CHECK(es.values(i) >= es.values(i - 1));
  Matrix rebuilt = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  CHECK(max_abs(rebuilt - rho.matrix()) < 1e-13);
  CHECK_THROWS_AS(eigh(Matrix::Zero(2, 3)), ShapeError);
  auto sq = psd_sqrt(rho.matrix());
  CHECK(max_abs(sq * sq - rho.matrix()) < 1e-13);
}

TEST_CASE("purify reproduces the state and has rank-sized reference") {
  auto rho = random_density(SystemLayout{{"A", 2}, {"B", 2}}, 3, 5);
  auto psi = purify(rho, "R");
  CHECK(psi.layout().labels() == LabelList{"R", "A", "B"});
  CHECK(psi.layout().dim("R") == 3);
  CHECK(max_abs(trace_out(psi.density(), {"R"}).matrix() - rho.matrix()) < 1e-13);
}

TEST_CASE("depolarizing Stinespring dilation matches the convex combination") {
  const double p = 0.5;
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  const Matrix kraus[4] = {std::sqrt(1 - 3 * p / 4) * identity(2), std::sqrt(p / 4) * x, std::sqrt(p / 4) * y,
                           std::sqrt(p / 4) * z};
  // Output index b * 4 + env.
  Matrix v = Matrix::Zero(8, 2);
  for (int k = 0; k < 4; ++k)
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) v(b * 4 + k, a) = kraus[k](b, a);
  Isometry dil(SystemLayout{{"A", 2}}, SystemLayout{{"B", 2}, {"Env", 4}}, v);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rho = random_density(SystemLayout{{"R", 2}, {"A", 2}}, 4, seed);
    auto out = apply_stinespring(rho, dil, {"A"}, {"Env"});
    CHECK(out.layout().labels() == LabelList{"R", "B"});
    Matrix want = (1 - p) * rho.matrix() + p * kron(partial_trace(rho, {"R"}).matrix(), identity(2) / 2.0);
    CHECK(max_abs(out.matrix() - want) < 1e-10);
  }
}

TEST_CASE("Haar unitaries are unitary, seeded, and uniformly spread") {
  auto u = haar_unitary(4, 17);
  CHECK(max_abs(u.adjoint() * u - identity(4)) < 1e-12);
  CHECK(max_abs(haar_unitary(4, 17) - u) == 0.0);
  CHECK(max_abs(haar_unitary(4, 18) - u) > 1e-3);
  Rng rng(99);
  double mean = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) mean += std::norm(haar_unitary(2, rng)(0, 0));
  mean /= n;
  CHECK(std::abs(mean - 0.5) < 0.03);
}

TEST_CASE("random_density has the requested rank") {
  SystemLayout l{{"A", 3}, {"B", 2}};
  for (std::size_t r = 1; r <= 6; ++r) CHECK(numerical_rank(random_density(l, r, r).matrix()) == r);
  CHECK_THROWS_AS(random_density(l, 0, 1), DomainError);
  CHECK_THROWS_AS(random_density(l, 7, 1), DomainError);
}
