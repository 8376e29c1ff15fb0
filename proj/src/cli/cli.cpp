#include "privsq/cli.hpp"

#include <cmath>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "privsq/entropy.hpp"
#include "privsq/private_states.hpp"
#include "privsq/squashed.hpp"
#include "privsq/state_file.hpp"
#include "privsq/verify.hpp"

namespace privsq {

using nlohmann::json;

namespace {

// Raised for bad flag combinations that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LabelList split_list(const std::string& s, char sep = ',') {
  LabelList out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<LabelList> split_groups(const std::string& s) {
  std::vector<LabelList> groups;
  for (const auto& g : split_list(s, ';')) groups.push_back(split_list(g));
  return groups;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("PRIVSQ_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno || *end != '\0' || env[0] == '-') throw UsageError("PRIVSQ_SEED must be a non-negative integer");
  return v;
}

json base_tolerances() {
  return {{"hermitian", tol::kHermitian}, {"trace", tol::kTrace},         {"psd", tol::kPsd},
          {"unit_norm", tol::kUnitNorm},  {"isometry", tol::kIsometry},   {"rank_cutoff", tol::kRankCutoff}};
}

json report_header(const std::string& command, std::uint64_t seed) {
  return {{"tool", "privsq"}, {"version", kToolVersion}, {"command", command}, {"seed", seed},
          {"tolerances", base_tolerances()}};
}

void write_report(const std::string& path, const json& report) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open report file '" + path + "' for writing");
  f << report.dump(2) << "\n";
}

json diagnostics_json(const OptimizerDiagnostics& d) {
  json restarts = json::array();
  for (const auto& r : d.restarts)
    restarts.push_back({{"index", r.index},
                        {"seed", r.seed},
                        {"value", r.finite ? json(r.value) : json(nullptr)},
                        {"iterations", r.iterations},
                        {"evaluations", r.evaluations},
                        {"converged", r.converged}});
  return {{"best_restart", d.best_restart}, {"failed", d.failed}, {"restarts", restarts}};
}

json optimizer_json(const OptimizerConfig& c) {
  return {{"restarts", c.restarts},
          {"max_iterations", c.max_iterations},
          {"tolerance", c.tolerance},
          {"init_scale", c.init_scale}};
}

// Options shared by every command.
struct Common {
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed (default: PRIVSQ_SEED or 0)");
  cmd->add_option("--out", c.out, "Output file");
}

struct GenArgs {
  Common common;
  bool priv = false, extension = false, approx = false;
  std::size_t k = 2, parties = 2, ext_dim = 2, shield_rank = 0;
  std::string shield_dims;
  double noise = 0.1;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  if (int(a.priv) + int(a.extension) + int(a.approx) != 1)
    throw UsageError("gen: choose exactly one of --private, --extension, --approx");
  if (a.common.out.empty()) throw UsageError("gen: --out is required");
  std::vector<std::size_t> dims;
  if (a.shield_dims.empty()) {
    dims.assign(a.parties, 2);
  } else {
    for (const auto& s : split_list(a.shield_dims)) {
      try {
        dims.push_back(std::stoul(s));
      } catch (const std::exception&) {
        throw UsageError("gen: --shield-dims must be a comma-separated list of positive integers");
      }
    }
  }
  if (dims.size() != a.parties)
    throw UsageError("gen: --shield-dims needs one entry per party (" + std::to_string(a.parties) + ")");

  Rng rng(a.common.seed);
  json summary = report_header("gen", a.common.seed);
  std::optional<DensityOperator> state;
  if (a.extension) {
    auto ext = random_private_extension(a.k, a.parties, dims, a.ext_dim, rng);
    state = ext.state;
    summary["kind"] = "extension";
  } else {
    auto spec = random_private_spec(a.k, a.parties, dims, rng, a.shield_rank);
    if (a.priv) {
      state = private_state(spec);
      summary["kind"] = "private";
    } else {
      auto approx = approx_private_state(spec, a.noise, rng.next_u64());
      state = approx.state;
      summary["kind"] = "approx";
      summary["noise"] = a.noise;
      summary["epsilon"] = approx.epsilon;
    }
  }
  const auto keys = key_labels(a.parties);
  const auto shields = shield_labels(a.parties);
  summary["layout"] = to_string(state->layout());
  summary["privacy_deviation"] = privacy_check(*state, a.k, keys, shields);
  write_state_file(a.common.out, *state);
  out << summary.dump(2) << "\n";
  return exit_code::kOk;
}

struct EntropyArgs {
  Common common;
  std::string state, quantity = "H", a, b, e, groups;
};

int cmd_entropy(const EntropyArgs& args, std::ostream& out) {
  const auto rho = read_state_file(args.state);
  const LabelList a = split_list(args.a), b = split_list(args.b), e = split_list(args.e);
  const auto groups = split_groups(args.groups);
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw UsageError("entropy: " + what);
  };
  double value = 0.0;
  const std::string& q = args.quantity;
  if (q == "H") {
    need(!a.empty(), "--a is required");
    value = vn_entropy(partial_trace(rho, a));
  } else if (q == "cond") {
    need(!a.empty() && !b.empty(), "--a and --b are required");
    Partition{{a, b}, {}}.validate(rho.layout());
    value = cond_entropy(rho, a, b);
  } else if (q == "cmi") {
    need(!a.empty() && !b.empty(), "--a and --b are required");
    Partition{{a, b}, e}.validate(rho.layout());
    value = cmi(rho, a, b, e);
  } else if (q == "multi" || q == "dual") {
    Partition p{groups, e};
    p.validate(rho.layout());
    value = q == "multi" ? multi_info(rho, groups, e) : multi_info_dual(rho, groups, e);
  } else {
    throw UsageError("entropy: unknown quantity '" + q + "' (H, cond, cmi, multi, dual)");
  }
  json report = report_header("entropy", args.common.seed);
  report["input"] = args.state;
  report["quantity"] = q;
  report["a"] = a;
  report["b"] = b;
  report["e"] = e;
  report["groups"] = groups;
  report["value"] = value;
  write_report(args.common.out, report);
  out << q << " = " << json(value).dump() << "\n";
  return exit_code::kOk;
}

struct EsqArgs {
  Common common;
  std::string state, a, b, groups, flavor = "I", channel;
  double param = 0.0;
  std::size_t d_e = 0, d_f = 0;
  OptimizerConfig cfg;
  bool serial = false;
};

Isometry channel_by_name(const std::string& name, double param) {
  if (name == "identity") return identity_channel_dilation();
  if (name == "depolarizing") return depolarizing_channel_dilation(param);
  if (name == "replacement") return replacement_channel_dilation(static_cast<std::size_t>(param));
  if (name == "amplitude-damping") return amplitude_damping_dilation(param);
  throw UsageError("esq: unknown channel '" + name + "' (identity, depolarizing, replacement, amplitude-damping)");
}

int cmd_esq(EsqArgs args, std::ostream& out) {
  args.cfg.seed = args.common.seed;
  args.cfg.parallel = !args.serial;
  args.cfg.validate();
  const SquashDims dims{args.d_e, args.d_f};
  json report = report_header("esq", args.common.seed);
  report["optimizer"] = optimizer_json(args.cfg);
  report["tolerances"]["optimizer"] = args.cfg.tolerance;

  if (!args.channel.empty()) {
    if (!args.state.empty()) throw UsageError("esq: --channel and --state are exclusive");
    const auto r = esq_channel_upper(channel_by_name(args.channel, args.param), "B", dims, args.cfg);
    report["mode"] = "channel";
    report["channel"] = args.channel;
    report["channel_param"] = args.param;
    report["value"] = r.value;
    report["heuristic"] = r.heuristic;
    report["dims"] = {{"d_e", r.d_e}, {"d_f", r.d_f}};
    report["diagnostics"] = diagnostics_json(r.diagnostics);
    write_report(args.common.out, report);
    out << "esq_channel (HEURISTIC) = " << json(r.value).dump() << "\n";
    return exit_code::kOk;
  }

  if (args.state.empty()) throw UsageError("esq: --state or --channel is required");
  const auto rho = read_state_file(args.state);
  EsqResult r;
  report["input"] = args.state;
  if (!args.groups.empty()) {
    if (args.flavor != "I" && args.flavor != "I_dual") throw UsageError("esq: --flavor must be I or I_dual");
    const auto groups = split_groups(args.groups);
    const MultiFlavor flavor = args.flavor == "I" ? MultiFlavor::kTotal : MultiFlavor::kDual;
    r = esq_multi_upper(rho, Partition{groups, {}}, flavor, dims, args.cfg);
    report["mode"] = "multipartite";
    report["flavor"] = args.flavor;
    report["groups"] = groups;
  } else {
    const LabelList a = split_list(args.a), b = split_list(args.b);
    if (a.empty() || b.empty()) throw UsageError("esq: give --a and --b, or --groups");
    r = esq_upper(rho, Partition{{a, b}, {}}, dims, args.cfg);
    report["mode"] = "bipartite";
    report["a"] = a;
    report["b"] = b;
  }
  report["value"] = r.value;
  report["ok"] = r.ok;
  report["dims"] = {{"d_eprime", r.d_eprime}, {"d_e", r.d_e}, {"d_f", r.d_f}};
  report["diagnostics"] = diagnostics_json(r.diagnostics);
  write_report(args.common.out, report);
  out << "esq_upper = " << json(r.value).dump() << " (d_E' = " << r.d_eprime << ", d_E = " << r.d_e
      << ", d_F = " << r.d_f << ")" << (r.ok ? "" : " [optimizer failed]") << "\n";
  return r.ok ? exit_code::kOk : exit_code::kCheckFailed;
}

struct VerifyArgs {
  Common common;
  std::string suite;
  std::size_t instances = 100;
  std::optional<double> tolerance;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  const SuiteResult r = run_suite(args.suite, {args.instances, args.common.seed, args.tolerance});
  json rows = json::array();
  for (const auto& c : r.checks) {
    rows.push_back({{"identity", c.identity},
                    {"instances", c.instances},
                    {"max_residual", c.max_residual},
                    {"tolerance", c.tolerance},
                    {"pass", c.pass}});
    out << (c.pass ? "PASS " : "FAIL ") << c.identity << ": max residual " << json(c.max_residual).dump()
        << " over " << c.instances << " instances (tol " << json(c.tolerance).dump() << ")\n";
  }
  json report = report_header("verify", args.common.seed);
  report["suite"] = r.suite;
  report["instances"] = args.instances;
  report["checks"] = rows;
  report["pass"] = r.pass();
  for (const auto& c : r.checks) report["tolerances"]["checks"][c.identity] = c.tolerance;
  write_report(args.common.out, report);
  return r.pass() ? exit_code::kOk : exit_code::kCheckFailed;
}

struct BoundArgs {
  Common common;
  bool thm1 = false, rate = false, channel = false;
  double esq = 0.0, eps = 0.0;
  std::size_t k = 2, n = 1, parties = 2;
  std::string mode = "F1";
  int c1 = kDefaultMultipartiteConstant, c2 = kDefaultMultipartiteConstant;
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  if (int(a.thm1) + int(a.rate) + int(a.channel) != 1)
    throw UsageError("bound: choose exactly one of --thm1, --rate, --channel");
  json report = report_header("bound", a.common.seed);
  report["esq"] = a.esq;
  report["epsilon"] = a.eps;
  if (a.thm1) {
    KeyBoundMode mode;
    if (a.mode == "F1") mode = KeyBoundMode::kF1;
    else if (a.mode == "F2") mode = KeyBoundMode::kF2;
    else if (a.mode == "F3") mode = KeyBoundMode::kF3;
    else throw UsageError("bound: --mode must be F1, F2 or F3");
    const KeyBound b = key_bound_thm1(a.esq, a.eps, a.k, mode, a.parties, a.c1, a.c2);
    const double log_k = std::log2(static_cast<double>(a.k));
    report["kind"] = "thm1";
    report["mode"] = a.mode;
    report["k"] = a.k;
    report["parties"] = a.parties;
    if (mode != KeyBoundMode::kF1) report["constants"] = {a.c1, a.c2};
    report["continuity"] = {{"kind", to_string(b.continuity.kind)}, {"argument", b.continuity.epsilon}};
    report["correction"] = b.correction;
    report["arrangement"] = b.arrangement;
    report["rhs"] = b.rhs;
    report["log2_k"] = log_k;
    report["consistent"] = log_k <= b.rhs;
    write_report(a.common.out, report);
    out << b.arrangement << "\nrhs = " << json(b.rhs).dump() << ", log2 K = " << json(log_k).dump() << "\n";
    return exit_code::kOk;
  }
  const double p = key_rate_bound(a.esq, a.eps, a.n);
  report["kind"] = a.rate ? "rate" : "channel";
  report["n"] = a.n;
  report["rate_bound"] = p;
  write_report(a.common.out, report);
  out << (a.rate ? "key rate" : "channel key rate") << " <= " << json(p).dump() << "\n";
  return exit_code::kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"privsq: private states and squashed-entanglement bounds", "privsq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("privsq ") + kToolVersion);

  std::uint64_t seed0 = 0;
  try {
    seed0 = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  }

  GenArgs gen;
  gen.common.seed = seed0;
  auto* g = app.add_subcommand("gen", "Generate a private state, extension, or approximate private state");
  add_common(g, gen.common);
  g->add_flag("--private", gen.priv, "Exact private state");
  g->add_flag("--extension", gen.extension, "Private state with a random extension E");
  g->add_flag("--approx", gen.approx, "Mixture (1-p) gamma + p tau with a random full-rank tau");
  g->add_option("--k", gen.k, "Key dimension")->check(CLI::Range(2, 16));
  g->add_option("--parties", gen.parties, "Number of parties")->check(CLI::Range(2, 6));
  g->add_option("--shield-dims", gen.shield_dims, "Comma-separated shield dims, one per party");
  g->add_option("--ext-dim", gen.ext_dim, "Dimension of E for --extension")->check(CLI::PositiveNumber);
  g->add_option("--noise", gen.noise, "Mixing weight p for --approx")->check(CLI::Range(0.0, 1.0));
  g->add_option("--shield-rank", gen.shield_rank, "Rank of the shield state (0 = full)");

  EntropyArgs ent;
  ent.common.seed = seed0;
  auto* e = app.add_subcommand("entropy", "Entropic quantities of a state file");
  add_common(e, ent.common);
  e->add_option("--state", ent.state, "State file")->required();
  e->add_option("--quantity", ent.quantity, "H, cond, cmi, multi, or dual");
  e->add_option("--a", ent.a, "Comma-separated labels of group A");
  e->add_option("--b", ent.b, "Comma-separated labels of group B");
  e->add_option("--e", ent.e, "Comma-separated labels of the conditioning group");
  e->add_option("--groups", ent.groups, "Parties for multi/dual, e.g. 'A1;A2;A3'");

  EsqArgs esq;
  esq.common.seed = seed0;
  auto* s = app.add_subcommand("esq", "Variational upper bounds on squashed entanglement");
  add_common(s, esq.common);
  s->add_option("--state", esq.state, "State file");
  s->add_option("--a", esq.a, "Bipartite: labels of A");
  s->add_option("--b", esq.b, "Bipartite: labels of B");
  s->add_option("--groups", esq.groups, "Multipartite parties, e.g. 'A1;A2;A3'");
  s->add_option("--flavor", esq.flavor, "Multipartite flavor: I or I_dual");
  s->add_option("--channel", esq.channel, "identity, depolarizing, replacement, or amplitude-damping");
  s->add_option("--param", esq.param, "Channel parameter");
  s->add_option("--d-e", esq.d_e, "Extension dimension d_E (0 = rank)");
  s->add_option("--d-f", esq.d_f, "Discarded dimension d_F (0 = rank)");
  s->add_option("--restarts", esq.cfg.restarts, "Optimizer restarts");
  s->add_option("--max-iter", esq.cfg.max_iterations, "Iterations per restart");
  s->add_option("--tol", esq.cfg.tolerance, "Objective decrease tolerance");
  s->add_option("--init-scale", esq.cfg.init_scale, "Initial parameter scale");
  s->add_flag("--serial", esq.serial, "Run restarts on one thread");

  VerifyArgs ver;
  ver.common.seed = seed0;
  auto* v = app.add_subcommand("verify", "Randomized identity and inequality suites");
  add_common(v, ver.common);
  v->add_option("--suite", ver.suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  v->add_option("--instances", ver.instances, "Random instances per check")->check(CLI::PositiveNumber);
  v->add_option("--tol", ver.tolerance, "Override every check's tolerance");

  BoundArgs bnd;
  bnd.common.seed = seed0;
  auto* b = app.add_subcommand("bound", "Key bounds from a squashed-entanglement value");
  add_common(b, bnd.common);
  b->add_flag("--thm1", bnd.thm1, "Approximate private state bound on log2 K");
  b->add_flag("--rate", bnd.rate, "Finite-n key rate bound for states");
  b->add_flag("--channel", bnd.channel, "Finite-n key rate bound for channels");
  b->add_option("--esq", bnd.esq, "Squashed entanglement value")->required();
  b->add_option("--eps", bnd.eps, "Approximation parameter epsilon");
  b->add_option("--k", bnd.k, "Key dimension");
  b->add_option("--n", bnd.n, "Number of copies or channel uses");
  b->add_option("--mode", bnd.mode, "F1 (bipartite), F2 or F3 (multipartite)");
  b->add_option("--parties", bnd.parties, "Number of parties");
  b->add_option("--c1", bnd.c1, "First multipartite constant");
  b->add_option("--c2", bnd.c2, "Second multipartite constant");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&ex) ? ex.what() : app.help()) << "\n";
      return exit_code::kOk;
    }
    err << "error: " << ex.what() << "\n";
    return exit_code::kUsage;
  }

  try {
    if (*g) return cmd_gen(gen, out);
    if (*e) return cmd_entropy(ent, out);
    if (*s) return cmd_esq(esq, out);
    if (*v) return cmd_verify(ver, out);
    if (*b) return cmd_bound(bnd, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
  } catch (const StateFileError& ex) {
    err << "error: " << ex.what() << "\n";
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
  } catch (const std::domain_error& ex) {
    err << "error: " << ex.what() << "\n";
  }
  return exit_code::kUsage;
}

int run_cli(const std::vector<std::string>& args) { return run_cli(args, std::cout, std::cerr); }

}  // namespace privsq
