#include "ctr/config.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ctr/demo.hpp"
#include "ctr/error.hpp"

namespace ctr {

namespace {

using nlohmann::json;

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  static const std::set<std::string> known = {
      "graph", "distribution", "nu", "regime", "h", "h_min", "h_max", "alpha", "K",
      "epsilon", "delta", "seed", "trials", "mode", "deployment", "heuristic_trials",
      "heuristic_attacker", "simulate", "timing", "literal_envelope", "out", "stem"};
  for (const auto& [k, _] : j.items()) {
    if (known.count(k) == 0) throw Error(ErrorCode::InvalidConfig, "unknown config key '" + k + "'");
  }
  RunConfig c;
  if (j.contains("graph")) c.graph = get_as<std::string>(j, "graph");
  if (j.contains("distribution")) c.distribution = j.at("distribution");
  if (j.contains("nu")) c.nu = get_as<std::string>(j, "nu");
  if (j.contains("regime")) c.regime = get_as<std::string>(j, "regime");
  if (j.contains("h")) c.h = get_as<std::size_t>(j, "h");
  if (j.contains("h_min")) c.h_min = get_as<std::size_t>(j, "h_min");
  if (j.contains("h_max")) c.h_max = get_as<std::size_t>(j, "h_max");
  if (j.contains("alpha")) c.alpha = j.at("alpha");
  if (j.contains("K") && !j.at("K").is_null()) c.K = get_as<std::size_t>(j, "K");
  if (j.contains("epsilon") && !j.at("epsilon").is_null()) c.epsilon = get_as<double>(j, "epsilon");
  if (j.contains("delta") && !j.at("delta").is_null()) c.delta = get_as<double>(j, "delta");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("trials")) c.trials = get_as<std::size_t>(j, "trials");
  if (j.contains("mode")) c.mode = get_as<std::string>(j, "mode");
  if (j.contains("deployment")) c.deployment = get_as<std::vector<std::string>>(j, "deployment");
  if (j.contains("heuristic_trials")) c.heuristic_trials = get_as<std::size_t>(j, "heuristic_trials");
  if (j.contains("heuristic_attacker"))
    c.heuristic_attacker = get_as<std::string>(j, "heuristic_attacker");
  if (j.contains("simulate")) c.simulate = get_as<bool>(j, "simulate");
  if (j.contains("timing")) c.timing = get_as<bool>(j, "timing");
  if (j.contains("literal_envelope")) c.literal_envelope = get_as<bool>(j, "literal_envelope");
  if (j.contains("out")) c.out = get_as<std::string>(j, "out");
  if (j.contains("stem")) c.stem = get_as<std::string>(j, "stem");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, "config '" + path + "': " + e.what());
  }
  RunConfig c = config_from_json(j);
  // Relative graph paths are taken relative to the config file.
  if (!c.graph.empty() && c.graph != "demo") {
    const std::filesystem::path g(c.graph);
    if (g.is_relative()) c.graph = (std::filesystem::path(path).parent_path() / g).string();
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["graph"] = c.graph;
  j["distribution"] = c.distribution;
  j["nu"] = c.nu;
  j["regime"] = c.regime;
  j["h"] = c.h;
  j["h_min"] = c.h_min;
  j["h_max"] = c.h_max;
  j["alpha"] = c.alpha;
  j["K"] = c.K ? json(*c.K) : json(nullptr);
  j["epsilon"] = c.epsilon ? json(*c.epsilon) : json(nullptr);
  j["delta"] = c.delta ? json(*c.delta) : json(nullptr);
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["mode"] = c.mode;
  j["deployment"] = c.deployment;
  j["heuristic_trials"] = c.heuristic_trials;
  j["heuristic_attacker"] = c.heuristic_attacker;
  j["simulate"] = c.simulate;
  j["timing"] = c.timing;
  j["literal_envelope"] = c.literal_envelope;
  j["out"] = c.out;
  j["stem"] = c.stem;
  return j;
}

NodeId resolve_node(const AttackGraph& g, std::string_view ref) {
  if (auto v = g.find_by_label(ref)) return *v;
  std::int64_t id = 0;
  const auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), id);
  if (ec == std::errc() && ptr == ref.data() + ref.size()) {
    if (auto v = g.find(id)) return *v;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown node '" + std::string(ref) + "'");
}

std::vector<double> parse_alpha(const AttackGraph& g, const json& spec) {
  const std::size_t n = g.spot().size();
  if (spec.is_array()) {
    std::vector<double> a;
    for (const auto& x : spec) {
      if (!x.is_number()) throw Error(ErrorCode::InvalidConfig, "alpha entries must be numbers");
      a.push_back(x.get<double>());
    }
    if (a.size() != n) {
      throw Error(ErrorCode::InvalidConfig, "alpha has " + std::to_string(a.size()) +
                                                " entries for " + std::to_string(n) + " spot nodes");
    }
    for (double x : a)
      if (!(x > 0.0)) throw Error(ErrorCode::InvalidConfig, "alpha entries must be positive");
    return a;
  }
  if (!spec.is_string()) throw Error(ErrorCode::InvalidConfig, "alpha must be a string or array");
  const std::string s = spec.get<std::string>();
  if (s == "uniform") return std::vector<double>(n, 1.0);
  const std::string prefix = "concentrated:";
  if (s.rfind(prefix, 0) == 0) {
    const auto rest = s.substr(prefix.size());
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "expected concentrated:<node>:<M>");
    }
    const NodeId v = resolve_node(g, rest.substr(0, colon));
    char* end = nullptr;
    const std::string mtext = rest.substr(colon + 1);
    const double m = std::strtod(mtext.c_str(), &end);
    if (end == mtext.c_str() || *end != '\0' || !(m > 0.0)) {
      throw Error(ErrorCode::InvalidConfig, "concentration must be a positive number");
    }
    std::vector<double> a(n, 1.0);
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (g.spot()[i] == v) {
        a[i] = m;
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::InvalidConfig, "concentrated node is not in V_spot");
    return a;
  }
  // Comma-separated list, as typed on the command line.
  std::vector<double> a;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') {
      throw Error(ErrorCode::InvalidConfig, "cannot parse alpha spec '" + s + "'");
    }
    a.push_back(x);
  }
  json arr = a;
  return parse_alpha(g, arr);
}

std::size_t resolve_samples(const RunConfig& c) {
  const bool pair = c.epsilon.has_value() || c.delta.has_value();
  if (c.K && pair) throw Error(ErrorCode::InvalidConfig, "give either K or (epsilon, delta), not both");
  if (c.K) {
    if (*c.K == 0) throw Error(ErrorCode::InvalidConfig, "K must be >= 1");
    return *c.K;
  }
  if (pair && !(c.epsilon && c.delta)) {
    throw Error(ErrorCode::InvalidConfig, "epsilon and delta must be given together");
  }
  return hoeffding_sample_size(c.epsilon.value_or(kDefaultEpsilon), c.delta.value_or(kDefaultDelta));
}

Instance resolve_instance(const RunConfig& config) {
  Instance inst;
  inst.config = config;
  RunConfig& c = inst.config;
  if (c.graph.empty()) throw Error(ErrorCode::InvalidConfig, "no graph given");
  const bool demo = c.graph == "demo";
  inst.graph = std::make_shared<const AttackGraph>(demo ? demo_graph() : load_graph(c.graph));
  if (c.distribution.is_null()) {
    c.distribution = demo ? demo_distribution().to_json()
                          : StepDistribution::geometric(kDefaultLambdaAttacker,
                                                        kDefaultLambdaDefender)
                                .to_json();
  }
  if (c.nu.empty()) c.nu = demo ? "entries" : "uniform";
  inst.base = std::make_unique<AttackMdp>(inst.graph, StepDistribution::from_json(c.distribution));
  if (c.nu == "uniform") {
    inst.nu = InitialDistribution::uniform_non_target(*inst.base);
  } else if (c.nu == "entries") {
    inst.nu = InitialDistribution::uniform_entries(*inst.base);
  } else {
    throw Error(ErrorCode::InvalidConfig, "nu must be 'uniform' or 'entries'");
  }
  if (c.h_max == 0) c.h_max = inst.graph->spot().size();
  (void)parse_regime(c.regime);
  (void)parse_regime(c.heuristic_attacker);
  if (c.mode != "both") (void)parse_sim_mode(c.mode);
  return inst;
}

DirichletParams dirichlet_params(const Instance& inst) {
  DirichletParams p;
  p.alpha = parse_alpha(*inst.graph, inst.config.alpha);
  p.samples = resolve_samples(inst.config);
  p.seed = inst.config.seed;
  return p;
}

json deployment_json(const AttackGraph& g, const Deployment& x) {
  json j = json::array();
  for (auto v : x.nodes) j.push_back(g.display_name(v));
  return j;
}

std::string deployment_text(const AttackGraph& g, const Deployment& x) {
  std::string s = "{";
  for (std::size_t i = 0; i < x.nodes.size(); ++i) {
    if (i) s += ",";
    s += g.display_name(x.nodes[i]);
  }
  return s + "}";
}

namespace {

// Route a policy plans from At(v, 0), ignoring detection and timing.
std::string planned_route(const AttackMdp& m, const Policy& pi, NodeId v) {
  const auto& g = m.graph();
  std::string route = g.display_name(v);
  std::size_t c = 0;
  while (!m.actions(m.at(v, c)).empty() && c < m.horizon()) {
    v = pi.next[m.at(v, c)];
    ++c;
    route += ">" + g.display_name(v);
  }
  return route;
}

}  // namespace

json solution_json(const AttackMdp& base, const RegimeSolution& sol,
                   const InitialDistribution& nu, bool timing) {
  const auto& g = base.graph();
  json j;
  j["regime"] = std::string(to_string(sol.regime));
  j["deployment"] = deployment_json(g, sol.deployment);
  j["value"] = sol.value;
  json table = json::array();
  for (const auto& row : sol.table)
    table.push_back({{"deployment", deployment_json(g, row.deployment)}, {"value", row.value}});
  json routes = json::array();
  for (const auto& [s, w] : nu.weights) {
    const NodeId v = base.state(s).node;
    std::map<std::string, std::size_t> counts;
    for (const auto& pi : sol.policies) ++counts[planned_route(base, pi, v)];
    json plans = json::array();
    for (const auto& [route, n] : counts) plans.push_back({{"route", route}, {"policies", n}});
    routes.push_back({{"start", g.display_name(v)}, {"weight", w}, {"plans", plans}});
  }
  j["policy"] = {{"count", sol.policies.size()}, {"routes", routes}};
  j["diagnostics"] = {{"table", table},
                      {"samples", sol.samples},
                      {"seed", sol.seed},
                      {"tied_states", sol.tied_states},
                      {"wall_ms", timing ? sol.wall_ms : 0.0}};
  return j;
}

json estimate_json(const SimEstimate& e) {
  return {{"trials", e.trials},       {"successes", e.successes}, {"frequency", e.frequency},
          {"stderr", e.stderr_},      {"ci95", {e.ci_low, e.ci_high}}, {"seed", e.seed}};
}

void write_csv_record(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const auto& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char ch : f) {
      if (ch == '"') out << '"';
      out << ch;
    }
    out << '"';
  }
  out << "\r\n";
}

std::string format_value(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace ctr
