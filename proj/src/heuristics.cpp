#include "ctr/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "ctr/error.hpp"

namespace ctr {

namespace {

void check_budget(const AttackGraph& g, std::size_t h) {
  if (h > g.spot().size()) {
    throw Error(ErrorCode::BudgetExceedsSpot,
                "budget " + std::to_string(h) + " exceeds |V_spot| = " +
                    std::to_string(g.spot().size()));
  }
}

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

}  // namespace

std::string_view to_string(Heuristic h) noexcept {
  return h == Heuristic::ShortestPath ? "shortest_path" : "random";
}

Heuristic parse_heuristic(std::string_view name) {
  if (name == "shortest_path" || name == "shortest-path") return Heuristic::ShortestPath;
  if (name == "random") return Heuristic::Random;
  throw Error(ErrorCode::InvalidConfig, "unknown heuristic '" + std::string(name) + "'");
}

std::vector<ShortestPathRank> shortest_path_ranking(const AttackGraph& g) {
  const std::size_t n = g.node_count();
  const auto hops = hops_to_target(g);
  auto dist = [&](NodeId v) { return hops[v] ? *hops[v] : kUnreachable; };

  // sigma[v]: number of shortest v->F paths, over edges that reduce the
  // distance by one.
  std::vector<double> sigma(n, 0.0);
  const auto& topo = g.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const NodeId v = *it;
    if (g.is_target(v)) {
      sigma[v] = 1.0;
      continue;
    }
    if (dist(v) == kUnreachable) continue;
    for (auto u : g.successors(v))
      if (dist(u) != kUnreachable && dist(u) + 1 == dist(v)) sigma[v] += sigma[u];
  }

  std::vector<NodeId> sources = g.entries();
  if (sources.empty()) {
    for (NodeId v = 0; v < n; ++v)
      if (!g.is_target(v)) sources.push_back(v);
  }

  std::vector<double> freq(n, 0.0);
  std::vector<double> tau(n);
  for (auto src : sources) {
    if (dist(src) == kUnreachable) continue;
    // tau[v]: shortest-path prefixes from src reaching v.
    std::fill(tau.begin(), tau.end(), 0.0);
    tau[src] = 1.0;
    for (auto v : topo) {
      if (tau[v] == 0.0 || g.is_target(v)) continue;
      for (auto u : g.successors(v))
        if (dist(u) != kUnreachable && dist(u) + 1 == dist(v)) tau[u] += tau[v];
    }
    for (NodeId v = 0; v < n; ++v) freq[v] += tau[v] * sigma[v];
  }

  std::vector<ShortestPathRank> ranks;
  for (auto v : g.spot()) ranks.push_back({v, freq[v], dist(v)});
  std::stable_sort(ranks.begin(), ranks.end(),
                   [](const ShortestPathRank& a, const ShortestPathRank& b) {
                     if (a.frequency != b.frequency) return a.frequency > b.frequency;
                     if (a.hops != b.hops) return a.hops < b.hops;
                     return a.node < b.node;
                   });
  return ranks;
}

Deployment shortest_path_defense(const AttackGraph& g, std::size_t h) {
  check_budget(g, h);
  const auto ranks = shortest_path_ranking(g);
  std::vector<NodeId> chosen;
  for (std::size_t i = 0; i < h; ++i) chosen.push_back(ranks[i].node);
  return Deployment::of(std::move(chosen));
}

Deployment random_defense(const AttackGraph& g, std::size_t h, Rng& rng) {
  check_budget(g, h);
  std::vector<NodeId> pool = g.spot();
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(h);
  return Deployment::of(std::move(pool));
}

Deployment random_defense(const AttackGraph& g, std::size_t h, std::uint64_t seed,
                          std::uint64_t index) {
  Rng rng = Rng::substream(seed, Stream::RandomDefense, index);
  return random_defense(g, h, rng);
}

AttackerModel AttackerModel::stackelberg() { return AttackerModel{}; }

AttackerModel AttackerModel::blind(const AttackMdp& base, std::size_t h) {
  const auto& g = base.graph();
  check_budget(g, h);
  const double q = static_cast<double>(h) / static_cast<double>(g.spot().size());
  AttackerModel a;
  a.regime_ = Regime::Blind;
  a.policies_.push_back(best_response(base.with_belief(BeliefVector::uniform_on_spot(g, q))));
  return a;
}

AttackerModel AttackerModel::dirichlet(const AttackMdp& base,
                                       const DirichletParams& params) {
  if (params.samples == 0) {
    throw Error(ErrorCode::ArgumentOutOfRange, "Dirichlet attacker needs K >= 1");
  }
  std::vector<Policy> policies;
  for (const auto& q : sample_beliefs(base.graph(), params))
    policies.push_back(best_response(base.with_belief(q)));
  return dirichlet(std::move(policies));
}

AttackerModel AttackerModel::dirichlet(std::vector<Policy> policies) {
  if (policies.empty()) {
    throw Error(ErrorCode::ArgumentOutOfRange, "Dirichlet attacker needs K >= 1");
  }
  AttackerModel a;
  a.regime_ = Regime::Dirichlet;
  a.policies_ = std::move(policies);
  return a;
}

double AttackerModel::value(const AttackMdp& base, const Deployment& x,
                            const InitialDistribution& nu) const {
  const AttackMdp m = base.with_deployment(x);
  if (regime_ == Regime::Stackelberg) return initial_value(best_response(m).value, nu);
  long double total = 0.0L;
  for (const auto& pi : policies_) total += initial_value(evaluate_policy(m, pi), nu);
  return static_cast<double>(total / static_cast<long double>(policies_.size()));
}

HeuristicReport evaluate_heuristic(const AttackMdp& base, std::size_t h,
                                   Heuristic heuristic,
                                   const AttackerModel& attacker,
                                   const InitialDistribution& nu,
                                   std::size_t trials, std::uint64_t seed) {
  const auto& g = base.graph();
  check_budget(g, h);
  if (trials == 0) throw Error(ErrorCode::ArgumentOutOfRange, "trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  HeuristicReport r;
  r.heuristic = heuristic;
  r.attacker = attacker.regime();
  r.seed = seed;
  if (heuristic == Heuristic::ShortestPath) {
    r.deployments.push_back(shortest_path_defense(g, h));
  } else {
    for (std::size_t t = 0; t < trials; ++t)
      r.deployments.push_back(random_defense(g, h, seed, t));
  }
  r.trials = r.deployments.size();
  for (const auto& x : r.deployments) r.values.push_back(attacker.value(base, x, nu));
  long double sum = 0.0L;
  for (double v : r.values) sum += v;
  const long double mean = sum / static_cast<long double>(r.trials);
  r.mean = static_cast<double>(mean);
  if (r.trials > 1) {
    long double ss = 0.0L;
    for (double v : r.values) ss += (v - mean) * (v - mean);
    r.sd = static_cast<double>(std::sqrt(ss / static_cast<long double>(r.trials - 1)));
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();
  return r;
}

}  // namespace ctr
