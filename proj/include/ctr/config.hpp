#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctr/compare.hpp"
#include "ctr/mdp.hpp"
#include "ctr/simulate.hpp"
#include "ctr/solvers.hpp"

namespace ctr {

// Every knob a command can read. Empty/absent fields take the documented
// default during resolve(); the resolved config is echoed into results.
struct RunConfig {
  std::string graph;                 // path, or "demo" for the bundled instance
  nlohmann::json distribution;       // null: graph default
  std::string nu;                    // "uniform" | "entries"; "": graph default
  std::string regime = "stackelberg";
  std::size_t h = 1;
  std::size_t h_min = 1;
  std::size_t h_max = 0;             // 0: |V_spot|
  nlohmann::json alpha = "uniform";  // "uniform" | [..] | "concentrated:<node>:<M>"
  std::optional<std::size_t> K;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::uint64_t seed = 0;
  std::size_t trials = 100000;
  std::string mode = "step-count";   // "step-count" | "continuous" | "both"
  std::vector<std::string> deployment;  // explicit deployment (simulate)
  std::size_t heuristic_trials = 100;
  std::string heuristic_attacker = "stackelberg";
  bool simulate = false;
  bool timing = true;
  bool literal_envelope = false;
  std::string out;
  std::string stem;
};

RunConfig config_from_json(const nlohmann::json& j);  // rejects unknown keys
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& c);

// Default step law when neither graph nor config names one.
inline constexpr double kDefaultLambdaAttacker = 2.0;
inline constexpr double kDefaultLambdaDefender = 1.0;
// (epsilon, delta) used when a Dirichlet run gives neither K nor a pair.
inline constexpr double kDefaultEpsilon = 0.1;
inline constexpr double kDefaultDelta = 0.1;

// Graph, law, base kernel and nu materialised from a config.
struct Instance {
  std::shared_ptr<const AttackGraph> graph;
  std::unique_ptr<AttackMdp> base;
  InitialDistribution nu;
  RunConfig config;  // with defaults filled in
};

Instance resolve_instance(const RunConfig& config);

// Node reference by label first, then by external id.
NodeId resolve_node(const AttackGraph& g, std::string_view ref);

// Concentration vector in g.spot() order.
std::vector<double> parse_alpha(const AttackGraph& g, const nlohmann::json& spec);

// K from the config: K itself, or the Hoeffding size for (epsilon, delta).
// Throws InvalidConfig when both are given.
std::size_t resolve_samples(const RunConfig& c);
DirichletParams dirichlet_params(const Instance& inst);

// JSON views of results. Node sets are written as display names.
nlohmann::json deployment_json(const AttackGraph& g, const Deployment& x);
std::string deployment_text(const AttackGraph& g, const Deployment& x);
nlohmann::json solution_json(const AttackMdp& base, const RegimeSolution& sol,
                             const InitialDistribution& nu, bool timing);
nlohmann::json estimate_json(const SimEstimate& e);

// Writes one RFC-4180 record; fields containing ',', '"', CR or LF are
// quoted with inner quotes doubled.
void write_csv_record(std::ostream& out, const std::vector<std::string>& fields);
inline constexpr const char* kSweepHeader =
    "h,strategy,deployment,analytic_value,sim_value,sim_stderr,trials,seed,wall_ms";

std::string format_value(double x);  // %.12g

}  // namespace ctr
