#pragma once

#include "ctr/mdp.hpp"

// Per-item bodies shared by the serial and OpenMP kernel loops.
namespace ctr::kernels::detail {

inline double best_response_value(const AttackMdp& base, const Deployment& x,
                                  const InitialDistribution& nu) {
  return initial_value(best_response(base.with_deployment(x)).value, nu);
}

inline double fixed_policy_value(const AttackMdp& base, const Deployment& x,
                                 const Policy& policy,
                                 const InitialDistribution& nu) {
  return initial_value(evaluate_policy(base.with_deployment(x), policy), nu);
}

inline double mean_policy_value(const AttackMdp& base, const Deployment& x,
                                std::span<const Policy> policies,
                                const InitialDistribution& nu) {
  const AttackMdp m = base.with_deployment(x);
  long double total = 0.0L;
  for (const auto& pi : policies) total += initial_value(evaluate_policy(m, pi), nu);
  return static_cast<double>(total / static_cast<long double>(policies.size()));
}

}  // namespace ctr::kernels::detail
