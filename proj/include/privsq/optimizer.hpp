#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "privsq/tensor.hpp"

namespace privsq {

struct OptimizerConfig {
  std::size_t restarts = 8;
  std::size_t max_iterations = 500;
  double tolerance = 1e-7;
  /// Standard deviation of the random initial parameters.
  double init_scale = 0.5;
  std::uint64_t seed = 0;
  /// Run restarts on worker threads. Results do not depend on this.
  bool parallel = true;

  void validate() const;
};

struct LocalResult {
  RealVector x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  bool finite = true;
};

struct RestartDiagnostics {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  bool finite = true;
};

struct OptimizerDiagnostics {
  std::vector<RestartDiagnostics> restarts;
  std::size_t best_restart = 0;
  /// Set when no restart produced a finite objective value.
  bool failed = false;
};

struct MultiStartResult {
  RealVector x;
  double value = 0.0;
  OptimizerDiagnostics diagnostics;
};

using Objective = std::function<double(const RealVector&)>;

// Limited-memory BFGS on central finite-difference gradients with Armijo
// backtracking. Stops when two consecutive iterations each decrease the
// objective by less than cfg.tolerance, or after cfg.max_iterations.
LocalResult minimize_local(const Objective& f, RealVector x0, const OptimizerConfig& cfg);

// cfg.restarts local runs; restart r starts from init_scale * N(0, 1)
// parameters drawn from Rng(cfg.seed + r). The result is the lowest final
// value, ties going to the lowest restart index. The objective must be safe
// to call concurrently.
MultiStartResult minimize(const Objective& f, std::size_t dimension, const OptimizerConfig& cfg);

/// init_scale * N(0,1) vector from Rng(seed).
RealVector random_parameters(std::size_t dimension, double scale, std::uint64_t seed);

}  // namespace privsq
