#include "ctr/compare.hpp"

namespace ctr {

double table_mean(const RegimeSolution& sol) {
  if (sol.table.empty()) return 0.0;
  long double total = 0.0L;
  for (const auto& row : sol.table) total += row.value;
  return static_cast<double>(total / static_cast<long double>(sol.table.size()));
}

RegimeComparison compare_regimes(const AttackMdp& base, std::size_t h,
                                 const ComparisonOptions& options,
                                 const InitialDistribution& nu) {
  RegimeComparison c;
  c.h = h;
  c.stackelberg = solve_stackelberg(base, h, nu);
  c.blind = solve_blind(base, h, nu);
  c.dirichlet = solve_dirichlet(base, h, options.dirichlet, nu);

  AttackerModel attacker = AttackerModel::stackelberg();
  if (options.heuristic_attacker == Regime::Blind) {
    attacker = AttackerModel::blind(base, h);
  } else if (options.heuristic_attacker == Regime::Dirichlet) {
    attacker = AttackerModel::dirichlet(c.dirichlet.policies);
  }
  c.shortest_path = evaluate_heuristic(base, h, Heuristic::ShortestPath, attacker, nu);
  c.random = evaluate_heuristic(base, h, Heuristic::Random, attacker, nu,
                                options.heuristic_trials, options.heuristic_seed);

  c.dirichlet_gap = c.dirichlet.value - c.stackelberg.value;
  c.stackelberg_row_mean = table_mean(c.stackelberg);
  c.dirichlet_row_mean = table_mean(c.dirichlet);
  c.row_improvement = c.stackelberg_row_mean > 0.0
                          ? 1.0 - c.dirichlet_row_mean / c.stackelberg_row_mean
                          : 0.0;
  return c;
}

}  // namespace ctr
