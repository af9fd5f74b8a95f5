#pragma once

#include <cstddef>
#include <cstdint>

#include "ctr/heuristics.hpp"
#include "ctr/solvers.hpp"

namespace ctr {

struct ComparisonOptions {
  DirichletParams dirichlet;
  std::size_t heuristic_trials = 100;
  std::uint64_t heuristic_seed = 0;
  // Attacker model the heuristic deployments are scored against.
  Regime heuristic_attacker = Regime::Stackelberg;
};

struct RegimeComparison {
  std::size_t h = 0;
  RegimeSolution stackelberg;
  RegimeSolution blind;
  RegimeSolution dirichlet;
  HeuristicReport shortest_path;
  HeuristicReport random;
  // dirichlet.value - stackelberg.value; never positive for exact means.
  double dirichlet_gap = 0.0;
  // Plain averages over each solution's per-deployment table.
  double stackelberg_row_mean = 0.0;
  double dirichlet_row_mean = 0.0;
  // 1 - dirichlet_row_mean / stackelberg_row_mean (0 when the latter is 0).
  double row_improvement = 0.0;
};

// Runs the three regime solvers and both heuristics on identical inputs.
RegimeComparison compare_regimes(const AttackMdp& base, std::size_t h,
                                 const ComparisonOptions& options,
                                 const InitialDistribution& nu);

double table_mean(const RegimeSolution& sol);

}  // namespace ctr
