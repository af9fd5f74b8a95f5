#include "ctr/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ctr/compare.hpp"
#include "ctr/config.hpp"
#include "ctr/demo.hpp"
#include "ctr/error.hpp"
#include "ctr/heuristics.hpp"
#include "ctr/kernels.hpp"
#include "ctr/milp.hpp"
#include "ctr/simulate.hpp"
#include "ctr/solvers.hpp"

namespace ctr {

namespace {

using nlohmann::json;

std::string fixed(double x, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string hex64(std::uint64_t x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') {
      throw Error(ErrorCode::InvalidConfig, "cannot parse number '" + item + "'");
    }
    out.push_back(x);
  }
  return out;
}

// "geometric:<lambda>:<lambda_D>", "table:<s0,s1,...>[:<tail>]" or a JSON
// object in the config-file form.
json parse_distribution_flag(const std::string& s) {
  if (!s.empty() && s.front() == '{') {
    try {
      return json::parse(s);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidConfig, std::string("--dist: ") + e.what());
    }
  }
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() == 3 && parts[0] == "geometric") {
    const auto la = parse_list(parts[1]), ld = parse_list(parts[2]);
    if (la.size() != 1 || ld.size() != 1) throw Error(ErrorCode::InvalidConfig, "bad --dist");
    return {{"kind", "geometric"}, {"lambda_attacker", la[0]}, {"lambda_defender", ld[0]}};
  }
  if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "table") {
    double tail = 0.0;
    if (parts.size() == 3) {
      const auto t = parse_list(parts[2]);
      if (t.size() != 1) throw Error(ErrorCode::InvalidConfig, "bad --dist tail");
      tail = t[0];
    }
    return {{"kind", "table"}, {"survival", parse_list(parts[1])}, {"tail", tail}};
  }
  throw Error(ErrorCode::InvalidConfig,
              "--dist must be geometric:<l>:<lD>, table:<s0,...>[:<tail>] or a JSON object");
}

// Flags shared by every instance-based subcommand. Each is applied on top
// of an optional --config file only when given on the command line.
struct InstanceFlags {
  std::string config, graph, dist, nu, alpha, out;
  std::size_t K = 0;
  double eps = 0.0, delta = 0.0;
  std::uint64_t seed = 0;
  bool no_timing = false;
  CLI::App* app = nullptr;

  void attach(CLI::App* sub, bool with_alpha) {
    app = sub;
    sub->add_option("--config", config, "JSON run-config file");
    sub->add_option("--graph", graph, "graph JSON file, or 'demo'");
    sub->add_option("--dist", dist, "step law: geometric:<l>:<lD> | table:<s0,...>[:<tail>]");
    sub->add_option("--nu", nu, "initial distribution: uniform | entries");
    sub->add_option("--seed", seed, "64-bit seed");
    sub->add_option("--out", out, "output file");
    sub->add_flag("--no-timing", no_timing, "write wall_ms as 0 for byte-stable output");
    if (with_alpha) {
      sub->add_option("--alpha", alpha, "uniform | a1,a2,... | concentrated:<node>:<M>");
      sub->add_option("--K", K, "Dirichlet sample count");
      sub->add_option("--eps", eps, "Hoeffding accuracy");
      sub->add_option("--delta", delta, "Hoeffding failure probability");
    }
  }

  bool given(const char* name) const { return app->count(name) > 0; }

  RunConfig build() const {
    RunConfig c = config.empty() ? RunConfig{} : load_config(config);
    if (given("--graph")) c.graph = graph;
    if (given("--dist")) c.distribution = parse_distribution_flag(dist);
    if (given("--nu")) c.nu = nu;
    if (given("--seed")) c.seed = seed;
    if (given("--out")) c.out = out;
    if (no_timing) c.timing = false;
    if (app->get_option_no_throw("--alpha") != nullptr) {
      if (given("--alpha")) c.alpha = alpha;
      if (given("--K")) {
        c.K = K;
        c.epsilon.reset();
        c.delta.reset();
      }
      if (given("--eps")) c.epsilon = eps;
      if (given("--delta")) c.delta = delta;
    }
    return c;
  }
};

void require_positive_budget(std::size_t h) {
  if (h == 0) throw Error(ErrorCode::InvalidConfig, "budget h must be >= 1");
}

json graph_summary(const AttackGraph& g) {
  return {{"hash", hex64(graph_hash(g))},
          {"nodes", g.node_count()},
          {"edges", g.edge_count()},
          {"spot", g.spot().size()},
          {"c_max", longest_path_bound(g)}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

RegimeSolution solve_regime(const Instance& inst, Regime r, std::size_t h) {
  switch (r) {
    case Regime::Stackelberg: return solve_stackelberg(*inst.base, h, inst.nu);
    case Regime::Blind: return solve_blind(*inst.base, h, inst.nu);
    case Regime::Dirichlet: return solve_dirichlet(*inst.base, h, dirichlet_params(inst), inst.nu);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown regime");
}

// --------------------------------------------------------------------------

int cmd_validate(const std::string& path, std::size_t top, std::ostream& out) {
  const auto g = load_graph(path);
  const std::size_t cmax = longest_path_bound(g);
  double paths = 0.0;
  for (auto e : g.entries()) paths += count_paths(g, e);
  auto names = [&](const std::vector<NodeId>& vs) {
    std::string s;
    for (auto v : vs) s += (s.empty() ? "" : " ") + g.display_name(v);
    return s.empty() ? std::string("(none)") : s;
  };
  out << path << ": valid\n";
  out << g.node_count() << " nodes, " << g.edge_count() << " edges, c_max=" << cmax << ", "
      << static_cast<unsigned long long>(paths) << " entry→target paths\n";
  out << "entries: " << names(g.entries()) << "\n";
  out << "targets: " << names(g.targets()) << "\n";
  out << "spot: " << names(g.spot()) << "\n";
  const auto bc = betweenness_centrality(g);
  std::vector<NodeId> order(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return bc[a] > bc[b]; });
  out << "betweenness (top " << std::min(top, order.size()) << "):";
  for (std::size_t i = 0; i < std::min(top, order.size()); ++i)
    out << " " << g.display_name(order[i]) << "=" << fixed(bc[order[i]], 3);
  out << "\n";
  for (const auto& w : g.warnings()) out << "warning: " << w << "\n";
  return 0;
}

int cmd_solve(const RunConfig& cfg, bool as_json, std::ostream& out) {
  require_positive_budget(cfg.h);
  const Instance inst = resolve_instance(cfg);
  const Regime r = parse_regime(inst.config.regime);
  RunConfig echoed = inst.config;
  if (r == Regime::Dirichlet) echoed.K = resolve_samples(inst.config);
  const auto sol = solve_regime(inst, r, inst.config.h);
  json j = solution_json(*inst.base, sol, inst.nu, inst.config.timing);
  j["schema"] = 1;
  j["command"] = "solve";
  j["config"] = config_to_json(echoed);
  j["graph"] = graph_summary(*inst.graph);
  j["h"] = inst.config.h;
  if (!inst.config.out.empty()) write_text(inst.config.out, dump(j));
  if (as_json) {
    out << dump(j);
  } else {
    out << "regime " << to_string(r) << ", h=" << inst.config.h << ": deployment "
        << deployment_text(*inst.graph, sol.deployment) << ", value " << fixed(sol.value, 7)
        << "\n";
    if (r == Regime::Dirichlet) out << "samples K=" << sol.samples << ", seed " << sol.seed << "\n";
    if (sol.tied_states > 0) out << "tied argmax states: " << sol.tied_states << "\n";
  }
  return 0;
}

struct SweepOptions {
  bool simulate = false;
};

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = resolve_instance(cfg);
  const auto& c = inst.config;
  const auto& g = *inst.graph;
  require_positive_budget(c.h_min);
  if (c.h_max < c.h_min || c.h_max > g.spot().size()) {
    throw Error(ErrorCode::InvalidConfig, "h range must lie within 1..|V_spot|");
  }
  ComparisonOptions opt;
  opt.dirichlet = dirichlet_params(inst);
  opt.heuristic_trials = c.heuristic_trials;
  opt.heuristic_seed = c.seed;
  opt.heuristic_attacker = parse_regime(c.heuristic_attacker);
  const SimMode mode = parse_sim_mode(c.mode == "both" ? "step-count" : c.mode);

  std::ostringstream csv;
  {
    std::vector<std::string> header;
    std::stringstream hs(kSweepHeader);
    std::string f;
    while (std::getline(hs, f, ',')) header.push_back(f);
    write_csv_record(csv, header);
  }
  const std::string seed = std::to_string(c.seed);
  auto ms = [&](double v) { return format_value(c.timing ? v : 0.0); };
  for (std::size_t h = c.h_min; h <= c.h_max; ++h) {
    const auto cmp = compare_regimes(*inst.base, h, opt, inst.nu);
    auto row = [&](const std::string& strategy, const std::string& dep, double value,
                   const Deployment* x, std::span<const Policy> policies, double wall,
                   std::string trials_field) {
      std::string sim_value, sim_se;
      if (c.simulate && x != nullptr && !policies.empty()) {
        const auto e = estimate_success(*inst.base, *x, policies, inst.nu, mode, c.trials, c.seed);
        sim_value = format_value(e.frequency);
        sim_se = format_value(e.stderr_);
        trials_field = std::to_string(c.trials);
      }
      write_csv_record(csv, {std::to_string(h), strategy, dep, format_value(value), sim_value,
                             sim_se, trials_field, seed, ms(wall)});
    };
    for (const RegimeSolution* sol : {&cmp.stackelberg, &cmp.blind, &cmp.dirichlet}) {
      row(std::string(to_string(sol->regime)), deployment_text(g, sol->deployment), sol->value,
          &sol->deployment, sol->policies, sol->wall_ms, "");
    }
    // Heuristic deployments are scored against the configured attacker.
    const Deployment& sp = cmp.shortest_path.deployments.front();
    std::vector<Policy> sp_policies;
    if (opt.heuristic_attacker == Regime::Stackelberg) {
      sp_policies.push_back(best_response(inst.base->with_deployment(sp)));
    } else if (opt.heuristic_attacker == Regime::Blind) {
      sp_policies = cmp.blind.policies;
    } else {
      sp_policies = cmp.dirichlet.policies;
    }
    row("shortest_path", deployment_text(g, sp), cmp.shortest_path.mean, &sp, sp_policies,
        cmp.shortest_path.wall_ms, "");
    row("random",
        "random(n=" + std::to_string(cmp.random.trials) + ",sd=" + format_value(cmp.random.sd) + ")",
        cmp.random.mean, nullptr, {}, cmp.random.wall_ms, std::to_string(cmp.random.trials));
  }
  if (!c.out.empty()) {
    write_text(c.out, csv.str());
  } else {
    out << csv.str();
  }
  return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = resolve_instance(cfg);
  const auto& c = inst.config;
  const auto& g = *inst.graph;
  if (c.trials == 0) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");

  Deployment x;
  std::vector<Policy> policies;
  double analytic = 0.0;
  std::string source;
  RunConfig echoed = c;
  if (!c.deployment.empty()) {
    std::vector<NodeId> nodes;
    for (const auto& ref : c.deployment) nodes.push_back(resolve_node(g, ref));
    x = Deployment::of(std::move(nodes));
    const AttackMdp m = inst.base->with_deployment(x);
    policies.push_back(best_response(m));
    analytic = initial_value(policies.front().value, inst.nu);
    source = "best response to the supplied deployment";
  } else {
    require_positive_budget(c.h);
    const Regime r = parse_regime(c.regime);
    if (r == Regime::Dirichlet) echoed.K = resolve_samples(c);
    auto sol = solve_regime(inst, r, c.h);
    x = sol.deployment;
    policies = std::move(sol.policies);
    analytic = sol.value;
    source = std::string(to_string(r)) + " solution";
  }

  json j;
  j["schema"] = 1;
  j["command"] = "simulate";
  j["config"] = config_to_json(echoed);
  j["graph"] = graph_summary(g);
  j["deployment"] = deployment_json(g, x);
  j["policy_source"] = source;
  j["analytic_value"] = analytic;
  json estimates = json::object();
  std::vector<std::pair<std::string, SimEstimate>> results;
  const std::vector<std::string> modes =
      c.mode == "both" ? std::vector<std::string>{"step-count", "continuous"}
                       : std::vector<std::string>{c.mode};
  for (const auto& mname : modes) {
    const auto e = estimate_success(*inst.base, x, policies, inst.nu, parse_sim_mode(mname),
                                    c.trials, c.seed);
    json ej = estimate_json(e);
    ej["delta"] = e.frequency - analytic;
    ej["z"] = e.stderr_ > 0.0 ? (e.frequency - analytic) / e.stderr_ : 0.0;
    estimates[mname] = ej;
    results.emplace_back(mname, e);
  }
  j["estimates"] = estimates;
  if (results.size() == 2) j["two_proportion_z"] = two_proportion_z(results[0].second, results[1].second);
  if (!c.out.empty()) write_text(c.out, dump(j));

  out << "deployment " << deployment_text(g, x) << " (" << source << "), analytic "
      << fixed(analytic, 7) << "\n";
  for (const auto& [mname, e] : results) {
    out << mname << ": " << fixed(e.frequency, 7) << " +/- " << fixed(e.stderr_, 7) << " over "
        << e.trials << " trials (delta " << fixed(e.frequency - analytic, 7) << ")\n";
  }
  if (results.size() == 2)
    out << "two-proportion z = " << fixed(j["two_proportion_z"].get<double>(), 4) << "\n";
  return 0;
}

int cmd_export(const RunConfig& cfg, std::ostream& out) {
  require_positive_budget(cfg.h);
  if (cfg.stem.empty()) throw Error(ErrorCode::InvalidConfig, "--stem is required");
  const Instance inst = resolve_instance(cfg);
  const auto& c = inst.config;
  const auto params = dirichlet_params(inst);
  std::vector<Policy> policies;
  for (const auto& q : sample_beliefs(*inst.graph, params))
    policies.push_back(best_response(inst.base->with_belief(q)));
  MilpExportOptions opt;
  opt.literal_lower_envelope = c.literal_envelope;
  opt.seed = c.seed;

  const auto attacker = export_attacker_lp(*inst.base, inst.nu);
  const auto stackelberg = export_stackelberg_milp(*inst.base, c.h, inst.nu);
  const auto dirichlet = export_dirichlet_milp(*inst.base, c.h, policies, inst.nu, opt);
  write_text(c.stem + ".attacker.lp", write_lp(attacker));
  write_text(c.stem + ".stackelberg.lp", write_lp(stackelberg));
  write_text(c.stem + ".dirichlet.lp", write_lp(dirichlet));

  json meta;
  meta["schema"] = 1;
  meta["graph_hash"] = hex64(graph_hash(*inst.graph));
  meta["h"] = c.h;
  meta["K"] = params.samples;
  meta["seed"] = c.seed;
  meta["nu"] = c.nu;
  meta["distribution"] = c.distribution;
  meta["models"] = {{"attacker", milp_metadata_json(attacker)},
                    {"stackelberg", milp_metadata_json(stackelberg)},
                    {"dirichlet", milp_metadata_json(dirichlet)}};
  write_text(c.stem + ".meta.json", dump(meta));
  for (const auto* name : {".attacker.lp", ".stackelberg.lp", ".dirichlet.lp", ".meta.json"})
    out << "wrote " << c.stem << name << "\n";
  return 0;
}

int cmd_demo(std::size_t K, std::uint64_t seed, const std::string& out_path, std::ostream& out,
             std::ostream& err) {
  DemoOptions opt;
  if (K > 0) opt.samples = K;
  opt.seed = seed;
  const auto report = run_demo(opt);
  out << report.text;
  if (!out_path.empty()) {
    json j;
    j["schema"] = 1;
    j["command"] = "demo";
    j["stackelberg_row"] = report.stackelberg_row;
    j["dirichlet_row"] = report.dirichlet_row;
    j["stackelberg_avg"] = report.stackelberg_avg;
    j["dirichlet_avg"] = report.dirichlet_avg;
    j["improvement"] = report.improvement;
    j["belief_pstar"] = {{"path_B", report.path_b}, {"path_C", report.path_c},
                         {"path_DE", report.path_de}};
    j["ok"] = report.ok;
    write_text(out_path, dump(j));
  }
  if (!report.ok) {
    for (const auto& c : report.checks) {
      if (!c.ok) {
        err << to_string(ErrorCode::AssertionFailed) << ": cell " << c.name << " = "
            << fixed(c.value, 9) << ", expected " << fixed(c.expected, 9) << "\n";
      }
    }
    return 1;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detector placement for stealthy intrusions on acyclic attack graphs", "ctr"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "ctr 1.0.0");

  std::string validate_path;
  std::size_t validate_top = 5;
  auto* validate = app.add_subcommand("validate", "check a graph file and print its census");
  validate->add_option("graph", validate_path, "graph JSON file")->required();
  validate->add_option("--top", validate_top, "betweenness entries to print");

  InstanceFlags solve_flags;
  std::string solve_regime_name;
  std::size_t solve_h = 1;
  bool solve_json = false;
  auto* solve = app.add_subcommand("solve", "solve one information regime");
  solve_flags.attach(solve, true);
  solve->add_option("--regime", solve_regime_name, "stackelberg | blind | dirichlet");
  solve->add_option("--h", solve_h, "protection budget");
  solve->add_flag("--json", solve_json, "print the JSON record instead of a summary");

  InstanceFlags sweep_flags;
  std::size_t h_min = 1, h_max = 0, sweep_trials = 0, heur_trials = 0;
  std::string sweep_mode, heur_attacker;
  bool sweep_sim = false;
  auto* sweep = app.add_subcommand("sweep", "all regimes and heuristics over a budget range (CSV)");
  sweep_flags.attach(sweep, true);
  sweep->add_option("--h-min", h_min, "smallest budget");
  sweep->add_option("--h-max", h_max, "largest budget (default |V_spot|)");
  sweep->add_flag("--simulate", sweep_sim, "add simulated columns");
  sweep->add_option("--trials", sweep_trials, "rollouts per simulated row");
  sweep->add_option("--mode", sweep_mode, "step-count | continuous");
  sweep->add_option("--heuristic-trials", heur_trials, "random-heuristic draws");
  sweep->add_option("--heuristic-attacker", heur_attacker, "attacker model for heuristics");

  InstanceFlags sim_flags;
  std::string sim_regime, sim_mode, sim_deployment;
  std::size_t sim_h = 1, sim_trials = 0;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo check of an analytic value");
  sim_flags.attach(simulate, true);
  simulate->add_option("--regime", sim_regime, "regime whose solution is simulated");
  simulate->add_option("--h", sim_h, "protection budget");
  simulate->add_option("--deployment", sim_deployment, "explicit deployment, e.g. B,C");
  simulate->add_option("--trials", sim_trials, "rollouts");
  simulate->add_option("--mode", sim_mode, "step-count | continuous | both");

  InstanceFlags exp_flags;
  std::string stem;
  std::size_t exp_h = 1;
  bool literal = false;
  auto* exp = app.add_subcommand("export-milp", "write LP-file models and a metadata sidecar");
  exp_flags.attach(exp, true);
  exp->add_option("--h", exp_h, "protection budget");
  exp->add_option("--stem", stem, "output path stem");
  exp->add_flag("--literal-envelope", literal, "emit the lower envelope w >= v' verbatim");

  double ss_eps = 0.0, ss_delta = 0.0;
  auto* ss = app.add_subcommand("sample-size", "Hoeffding sample size K");
  ss->add_option("--eps", ss_eps, "accuracy in (0,1)")->required();
  ss->add_option("--delta", ss_delta, "failure probability in (0,1)")->required();

  std::size_t demo_K = 0;
  std::uint64_t demo_seed = DemoOptions{}.seed;
  std::string demo_out;
  auto* demo = app.add_subcommand("demo", "reproduce the six-node illustration");
  demo->add_option("--K", demo_K, "Dirichlet samples");
  demo->add_option("--seed", demo_seed, "seed");
  demo->add_option("--out", demo_out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    kernels::apply_thread_limit_from_env();
    if (validate->parsed()) return cmd_validate(validate_path, validate_top, out);
    if (solve->parsed()) {
      RunConfig c = solve_flags.build();
      if (solve->count("--regime")) c.regime = solve_regime_name;
      if (solve->count("--h")) c.h = solve_h;
      return cmd_solve(c, solve_json, out);
    }
    if (sweep->parsed()) {
      RunConfig c = sweep_flags.build();
      if (sweep->count("--h-min")) c.h_min = h_min;
      if (sweep->count("--h-max")) c.h_max = h_max;
      if (sweep_sim) c.simulate = true;
      if (sweep->count("--trials")) c.trials = sweep_trials;
      if (sweep->count("--mode")) c.mode = sweep_mode;
      if (sweep->count("--heuristic-trials")) c.heuristic_trials = heur_trials;
      if (sweep->count("--heuristic-attacker")) c.heuristic_attacker = heur_attacker;
      return cmd_sweep(c, out);
    }
    if (simulate->parsed()) {
      RunConfig c = sim_flags.build();
      if (simulate->count("--regime")) c.regime = sim_regime;
      if (simulate->count("--h")) c.h = sim_h;
      if (simulate->count("--trials")) c.trials = sim_trials;
      if (simulate->count("--mode")) c.mode = sim_mode;
      if (simulate->count("--deployment")) {
        c.deployment.clear();
        std::stringstream ds(sim_deployment);
        std::string item;
        while (std::getline(ds, item, ',')) c.deployment.push_back(item);
      }
      return cmd_simulate(c, out);
    }
    if (exp->parsed()) {
      RunConfig c = exp_flags.build();
      if (exp->count("--h")) c.h = exp_h;
      if (exp->count("--stem")) c.stem = stem;
      if (literal) c.literal_envelope = true;
      return cmd_export(c, out);
    }
    if (ss->parsed()) {
      out << hoeffding_sample_size(ss_eps, ss_delta) << "\n";
      return 0;
    }
    if (demo->parsed()) return cmd_demo(demo_K, demo_seed, demo_out, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidConfig ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ctr
