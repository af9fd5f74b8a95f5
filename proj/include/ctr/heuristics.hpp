#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ctr/mdp.hpp"
#include "ctr/random.hpp"
#include "ctr/solvers.hpp"

namespace ctr {

enum class Heuristic { ShortestPath, Random };

std::string_view to_string(Heuristic h) noexcept;
Heuristic parse_heuristic(std::string_view name);

// Protects the top h spot nodes ranked by (number of shortest source->F
// paths through the node, descending; hops to the nearest target,
// ascending; id, ascending). Sources are the entries, or V \ F when the
// graph declares none. Nodes on no shortest path fall through to the
// proximity ranking.
Deployment shortest_path_defense(const AttackGraph& g, std::size_t h);

// Per-node ranking statistics used by shortest_path_defense.
struct ShortestPathRank {
  NodeId node = 0;
  double frequency = 0.0;
  std::size_t hops = 0;  // SIZE_MAX when F is unreachable
};
std::vector<ShortestPathRank> shortest_path_ranking(const AttackGraph& g);

// Uniform exactly-h subset of V_spot by a partial Fisher-Yates shuffle.
Deployment random_defense(const AttackGraph& g, std::size_t h, Rng& rng);
// Trial `index` of a seeded sequence of random deployments.
Deployment random_defense(const AttackGraph& g, std::size_t h,
                          std::uint64_t seed, std::uint64_t index = 0);

// How the attacker reacts to a fixed deployment.
class AttackerModel {
 public:
  // Observes x and best-responds.
  static AttackerModel stackelberg();
  // Plays the uniform-belief policy for budget h.
  static AttackerModel blind(const AttackMdp& base, std::size_t h);
  // Plays each sampled-belief policy; the value is their mean.
  static AttackerModel dirichlet(const AttackMdp& base,
                                 const DirichletParams& params);
  static AttackerModel dirichlet(std::vector<Policy> policies);

  Regime regime() const noexcept { return regime_; }
  const std::vector<Policy>& policies() const noexcept { return policies_; }

  double value(const AttackMdp& base, const Deployment& x,
               const InitialDistribution& nu) const;

 private:
  Regime regime_ = Regime::Stackelberg;
  std::vector<Policy> policies_;
};

struct HeuristicReport {
  Heuristic heuristic = Heuristic::ShortestPath;
  Regime attacker = Regime::Stackelberg;
  std::vector<Deployment> deployments;  // one per trial
  std::vector<double> values;           // realized value per trial
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for one trial
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

// Shortest-path runs once; random averages over `trials` seeded draws.
HeuristicReport evaluate_heuristic(const AttackMdp& base, std::size_t h,
                                   Heuristic heuristic,
                                   const AttackerModel& attacker,
                                   const InitialDistribution& nu,
                                   std::size_t trials = 1,
                                   std::uint64_t seed = 0);

}  // namespace ctr
