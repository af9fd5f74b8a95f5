#include "ctr/kernels.hpp"
#include "kernel_items.hpp"

namespace ctr::kernels::serial {

std::vector<double> best_response_values(const AttackMdp& base,
                                         std::span<const Deployment> deployments,
                                         const InitialDistribution& nu) {
  std::vector<double> out;
  out.reserve(deployments.size());
  for (const auto& x : deployments) out.push_back(detail::best_response_value(base, x, nu));
  return out;
}

std::vector<double> fixed_policy_values(const AttackMdp& base,
                                        std::span<const Deployment> deployments,
                                        const Policy& policy,
                                        const InitialDistribution& nu) {
  std::vector<double> out;
  out.reserve(deployments.size());
  for (const auto& x : deployments)
    out.push_back(detail::fixed_policy_value(base, x, policy, nu));
  return out;
}

std::vector<double> mean_policy_values(const AttackMdp& base,
                                       std::span<const Deployment> deployments,
                                       std::span<const Policy> policies,
                                       const InitialDistribution& nu) {
  std::vector<double> out;
  out.reserve(deployments.size());
  for (const auto& x : deployments)
    out.push_back(detail::mean_policy_value(base, x, policies, nu));
  return out;
}

std::vector<Policy> belief_policies(const AttackMdp& base,
                                    std::span<const BeliefVector> beliefs) {
  std::vector<Policy> out;
  out.reserve(beliefs.size());
  for (const auto& q : beliefs) out.push_back(best_response(base.with_belief(q)));
  return out;
}

std::uint64_t rollout_successes(const RolloutTask& task, std::uint64_t trials) {
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t)
    if (run_trial(task, t).kind == RolloutOutcome::Kind::Success) ++successes;
  return successes;
}

}  // namespace ctr::kernels::serial
