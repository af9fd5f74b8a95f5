#pragma once

#include <cstddef>
#include <cstdint>

#include "ctr/graph.hpp"
#include "ctr/random.hpp"
#include "ctr/step_distribution.hpp"

namespace ctr {

struct RandomDagOptions {
  std::size_t nodes = 8;
  double edge_probability = 0.35;
  std::size_t targets = 1;   // the highest ids
  std::size_t entries = 1;   // the lowest ids
  std::size_t spot = 0;      // 0 means every non-target node
};

// Random DAG whose edges all point from lower to higher id. Every
// non-target node gets at least one out-edge. Labels are "n<id>".
GraphSpec random_dag_spec(const RandomDagOptions& options, std::uint64_t seed);
AttackGraph random_dag(const RandomDagOptions& options, std::uint64_t seed);

// Geometric law with rates drawn from [0.5, 4], or an explicit
// non-increasing table of random length.
StepDistribution random_distribution(Rng& rng);

// High-redundancy instance: one entry A with `redundant` parallel two-hop
// routes A -> S_i -> T, plus `funnels` bottlenecks B_j -> T each fed by
// `feeders` nodes C_j_i -> B_j. Spot covers every non-target node.
// Shortest-path protection spends its budget on the redundant S_i, while
// the clones gathered behind each funnel make the B_j far more valuable.
GraphSpec high_redundancy_spec(std::size_t redundant, std::size_t funnels,
                               std::size_t feeders);
AttackGraph high_redundancy_graph(std::size_t redundant, std::size_t funnels,
                                  std::size_t feeders);

}  // namespace ctr
