#include <cmath>
#include <limits>

#include "privsq/squashed.hpp"

namespace privsq {

namespace {

constexpr std::size_t kMaxChannelInputDim = 4;
constexpr std::size_t kOuterRounds = 10;

const SystemLayout kQubitIn{{"A'", 2}};

Isometry from_kraus(const std::vector<Matrix>& kraus) {
  const auto k = static_cast<Eigen::Index>(kraus.size());
  Matrix v = Matrix::Zero(2 * k, 2);
  // Output index (b, env) = b * k + env.
  for (Eigen::Index e = 0; e < k; ++e)
    for (Eigen::Index b = 0; b < 2; ++b) v.row(b * k + e) = kraus[e].row(b);
  return Isometry(kQubitIn, SystemLayout{{"B", 2}, {"Env", static_cast<std::size_t>(k)}}, v);
}

// Pure inputs, channel, and squashing for one dilation.
class ChannelProblem {
 public:
  ChannelProblem(const Isometry& dilation, const std::string& output_label) : dilation_(dilation) {
    const auto& out = dilation.output();
    out.position(output_label);
    input_dim_ = dilation.input().total_dim();
    input_label_ = "A";
    while (out.contains(input_label_)) input_label_ += "_";
    output_label_ = output_label;
    env_labels_ = out.complement(LabelList{output_label});
    env_dim_ = out.dim_of(env_labels_);
    output_dim_ = out.dim(output_label);
  }

  std::size_t input_dim() const { return input_dim_; }
  std::size_t env_dim() const { return env_dim_; }
  std::size_t input_params() const { return 2 * input_dim_ * input_dim_; }

  Vector input_state(const RealVector& p) const {
    const auto n = static_cast<Eigen::Index>(input_dim_ * input_dim_);
    Vector psi(n);
    for (Eigen::Index i = 0; i < n; ++i) psi(i) = Complex(p(i), p(n + i));
    const double norm = psi.norm();
    if (norm < 1e-300) return Vector::Unit(n, 0);
    return psi / norm;
  }

  SquashingProblem problem(const RealVector& psi_params) const {
    const Vector psi = input_state(psi_params);
    const auto d = static_cast<Eigen::Index>(input_dim_);
    const Matrix psi_m = Eigen::Map<const Matrix>(psi.data(), d, d).transpose();  // (a, a')
    const Matrix phi = psi_m * dilation_.matrix().transpose();                      // (a, out)
    const Matrix phi_t = phi.transpose();
    Vector amps = Eigen::Map<const Vector>(phi_t.data(), phi_t.size());
    const SystemLayout layout = concat(SystemLayout{{input_label_, input_dim_}}, dilation_.output());
    LabelList order{input_label_, output_label_};
    order.insert(order.end(), env_labels_.begin(), env_labels_.end());
    const PureStateVector arranged = permute_systems(PureStateVector(layout, amps / amps.norm()), order);
    const auto d_env = static_cast<Eigen::Index>(env_dim_);
    const auto d_ab = static_cast<Eigen::Index>(input_dim_ * output_dim_);
    Matrix branches = Eigen::Map<const Matrix>(arranged.amplitudes().data(), d_env, d_ab).transpose();
    std::string e_label = "E";
    while (e_label == input_label_ || e_label == output_label_) e_label += "_";
    return SquashingProblem(SystemLayout{{input_label_, input_dim_}, {output_label_, output_dim_}},
                            std::move(branches), e_label);
  }

  double value(const RealVector& psi_params, const RealVector& theta, std::size_t d_e, std::size_t d_f) const {
    const SquashingAnsatz a{env_dim_, d_e, d_f, theta};
    const DensityOperator omega = problem(psi_params).extend(a.isometry(), d_e, d_f);
    return 0.5 * cmi(omega, {input_label_}, {output_label_}, {omega.layout().systems().back().label});
  }

 private:
  const Isometry& dilation_;
  std::size_t input_dim_ = 1;
  std::size_t env_dim_ = 1;
  std::size_t output_dim_ = 1;
  std::string input_label_;
  std::string output_label_;
  LabelList env_labels_;
};

}  // namespace

Isometry identity_channel_dilation() {
  return Isometry(kQubitIn, SystemLayout{{"B", 2}, {"Env", 1}}, identity(2));
}

Isometry depolarizing_channel_dilation(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing channel: p outside [0, 1]");
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  const double a = std::sqrt(1.0 - 3.0 * p / 4.0);
  const double b = std::sqrt(p / 4.0);
  return from_kraus({a * identity(2), b * x, b * y, b * z});
}

Isometry replacement_channel_dilation(std::size_t target_state) {
  if (target_state > 1) throw DomainError("replacement channel: target must be 0 or 1");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(target_state, 0) = 1.0;
  k1(target_state, 1) = 1.0;
  return from_kraus({k0, k1});
}

Isometry amplitude_damping_dilation(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("amplitude damping: gamma outside [0, 1]");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return from_kraus({k0, k1});
}

ChannelEsqResult esq_channel_upper(const Isometry& dilation, const std::string& output_label,
                                   SquashDims dims, const OptimizerConfig& cfg) {
  cfg.validate();
  if (dilation.input().total_dim() > kMaxChannelInputDim)
    throw DomainError("esq_channel_upper: input dimension " + std::to_string(dilation.input().total_dim()) +
                      " exceeds the limit of " + std::to_string(kMaxChannelInputDim));
  const ChannelProblem channel(dilation, output_label);
  const std::size_t d_e = dims.d_e ? dims.d_e : channel.env_dim();
  const std::size_t d_f = dims.d_f ? dims.d_f : channel.env_dim();
  const std::size_t theta_size = SquashingAnsatz::param_count(d_e, d_f);
  SquashingAnsatz{channel.env_dim(), d_e, d_f, RealVector::Zero(theta_size)}.validate();

  ChannelEsqResult out;
  out.d_e = d_e;
  out.d_f = d_f;
  out.value = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Rng rng(cfg.seed + r);
    RealVector psi(channel.input_params());
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = rng.normal();
    RealVector theta(theta_size);
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = cfg.init_scale * rng.normal();

    RestartDiagnostics diag{r, cfg.seed + r, 0.0, 0, 0, false, true};
    auto inner = [&](const RealVector& psi_params, const RealVector& start) {
      LocalResult res = minimize_local(
          [&](const RealVector& t) { return channel.value(psi_params, t, d_e, d_f); }, start, cfg);
      diag.iterations += res.iterations;
      diag.evaluations += res.evaluations;
      return res;
    };

    LocalResult best = inner(psi, theta);
    for (std::size_t round = 0; round < kOuterRounds && best.finite; ++round) {
      LocalResult ascent = minimize_local(
          [&](const RealVector& p) { return -channel.value(p, best.x, d_e, d_f); }, psi, cfg);
      diag.iterations += ascent.iterations;
      diag.evaluations += ascent.evaluations;
      LocalResult next = inner(ascent.x, best.x);
      if (!(next.finite && next.value > best.value + cfg.tolerance)) break;
      psi = ascent.x;
      best = std::move(next);
    }
    diag.value = best.value;
    diag.finite = best.finite;
    diag.converged = best.converged;
    out.diagnostics.restarts.push_back(diag);
    if (best.finite && (!any || best.value > out.value)) {
      any = true;
      out.value = best.value;
      out.input = channel.input_state(psi);
      out.ansatz = SquashingAnsatz{channel.env_dim(), d_e, d_f, best.x};
      out.diagnostics.best_restart = r;
    }
  }
  out.diagnostics.failed = !any;
  return out;
}

}  // namespace privsq
