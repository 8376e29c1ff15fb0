#include "privsq/optimizer.hpp"

#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <thread>

namespace privsq {

namespace {

constexpr double kFdStep = 1e-5;
constexpr std::size_t kMemory = 8;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;

struct Counted {
  const Objective& f;
  std::size_t calls = 0;

  double operator()(const RealVector& x) {
    ++calls;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }
};

RealVector fd_gradient(Counted& f, RealVector x) {
  RealVector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    x(i) = xi + kFdStep;
    const double up = f(x);
    x(i) = xi - kFdStep;
    const double down = f(x);
    x(i) = xi;
    g(i) = (up - down) / (2.0 * kFdStep);
    if (!std::isfinite(g(i))) g(i) = 0.0;
  }
  return g;
}

// Two-loop recursion for the L-BFGS direction -H g.
RealVector lbfgs_direction(const RealVector& g, const std::deque<std::pair<RealVector, RealVector>>& memory) {
  RealVector q = g;
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    const auto& [s, y] = memory[i];
    alpha[i] = s.dot(q) / y.dot(s);
    q -= alpha[i] * y;
  }
  if (!memory.empty()) {
    const auto& [s, y] = memory.back();
    q *= s.dot(y) / y.dot(y);
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const auto& [s, y] = memory[i];
    const double beta = y.dot(q) / y.dot(s);
    q += (alpha[i] - beta) * s;
  }
  return -q;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (restarts < 1) throw DomainError("optimizer: restarts must be positive");
  if (max_iterations < 1) throw DomainError("optimizer: max iterations must be positive");
  if (!(tolerance > 0.0)) throw DomainError("optimizer: tolerance must be positive");
  if (!(init_scale > 0.0)) throw DomainError("optimizer: initialization scale must be positive");
}

LocalResult minimize_local(const Objective& objective, RealVector x0, const OptimizerConfig& cfg) {
  Counted f{objective};
  LocalResult out;
  out.x = std::move(x0);
  out.value = f(out.x);
  if (!std::isfinite(out.value)) {
    out.finite = false;
    out.evaluations = f.calls;
    return out;
  }
  if (out.x.size() == 0) {
    out.converged = true;
    out.evaluations = f.calls;
    return out;
  }

  std::deque<std::pair<RealVector, RealVector>> memory;
  RealVector g = fd_gradient(f, out.x);
  int small_steps = 0;
  for (out.iterations = 0; out.iterations < cfg.max_iterations; ++out.iterations) {
    if (g.norm() < 1e-12) {
      out.converged = true;
      break;
    }
    RealVector d = lbfgs_direction(g, memory);
    if (!(d.dot(g) < 0.0)) {
      memory.clear();
      d = -g;
    }
    // Without curvature information, cap the first trial step at unit length.
    double t = memory.empty() ? std::min(1.0, 1.0 / d.norm()) : 1.0;
    const double slope = d.dot(g);
    RealVector trial;
    double trial_value = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
      trial = out.x + t * d;
      trial_value = f(trial);
      if (trial_value <= out.value + kArmijo * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      out.converged = true;
      break;
    }
    const RealVector g_new = fd_gradient(f, trial);
    const RealVector s = trial - out.x;
    const RealVector y = g_new - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      memory.emplace_back(s, y);
      if (memory.size() > kMemory) memory.pop_front();
    }
    const double decrease = out.value - trial_value;
    out.x = trial;
    out.value = trial_value;
    g = g_new;
    small_steps = decrease < cfg.tolerance ? small_steps + 1 : 0;
    if (small_steps >= 2) {
      out.converged = true;
      ++out.iterations;
      break;
    }
  }
  out.evaluations = f.calls;
  return out;
}

RealVector random_parameters(std::size_t dimension, double scale, std::uint64_t seed) {
  Rng rng(seed);
  RealVector x(dimension);
  for (std::size_t i = 0; i < dimension; ++i) x(i) = scale * rng.normal();
  return x;
}

MultiStartResult minimize(const Objective& f, std::size_t dimension, const OptimizerConfig& cfg) {
  cfg.validate();
  auto run = [&](std::size_t r) {
    return minimize_local(f, random_parameters(dimension, cfg.init_scale, cfg.seed + r), cfg);
  };

  std::vector<LocalResult> results(cfg.restarts);
  const std::size_t workers = cfg.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1;
  if (workers > 1 && cfg.restarts > 1) {
    std::vector<std::future<LocalResult>> pending;
    for (std::size_t r = 0; r < cfg.restarts; ++r) pending.push_back(std::async(std::launch::async, run, r));
    for (std::size_t r = 0; r < cfg.restarts; ++r) results[r] = pending[r].get();
  } else {
    for (std::size_t r = 0; r < cfg.restarts; ++r) results[r] = run(r);
  }

  MultiStartResult out;
  out.value = std::numeric_limits<double>::infinity();
  bool any_finite = false;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    const auto& res = results[r];
    out.diagnostics.restarts.push_back(
        {r, cfg.seed + r, res.value, res.iterations, res.evaluations, res.converged, res.finite});
    if (res.finite && std::isfinite(res.value) && (!any_finite || res.value < out.value)) {
      any_finite = true;
      out.value = res.value;
      out.x = res.x;
      out.diagnostics.best_restart = r;
    }
  }
  out.diagnostics.failed = !any_finite;
  if (!any_finite) out.x = results.front().x;
  return out;
}

}  // namespace privsq
