#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctr/mdp.hpp"
#include "ctr/simulate.hpp"

// Data-parallel kernels behind the regime solvers and the simulator. Each
// kernel exists twice: a plain serial loop kept as the reference, and an
// OpenMP version. Outputs are written to per-index slots and reduced in
// index order, so both produce bit-identical results for any worker count.
namespace ctr::kernels {

namespace serial {

std::vector<double> best_response_values(const AttackMdp& base,
                                         std::span<const Deployment> deployments,
                                         const InitialDistribution& nu);

// Realized value of one fixed policy under each deployment.
std::vector<double> fixed_policy_values(const AttackMdp& base,
                                        std::span<const Deployment> deployments,
                                        const Policy& policy,
                                        const InitialDistribution& nu);

// Mean over `policies` of the realized value under each deployment.
// Accumulated in extended precision so that a mean of K equal values
// reproduces the value exactly.
std::vector<double> mean_policy_values(const AttackMdp& base,
                                       std::span<const Deployment> deployments,
                                       std::span<const Policy> policies,
                                       const InitialDistribution& nu);

std::vector<Policy> belief_policies(const AttackMdp& base,
                                    std::span<const BeliefVector> beliefs);

// Successes among trials 0..trials-1 of run_trial(task, t).
std::uint64_t rollout_successes(const RolloutTask& task, std::uint64_t trials);

}  // namespace serial

namespace omp {

std::vector<double> best_response_values(const AttackMdp& base,
                                         std::span<const Deployment> deployments,
                                         const InitialDistribution& nu);

std::vector<double> fixed_policy_values(const AttackMdp& base,
                                        std::span<const Deployment> deployments,
                                        const Policy& policy,
                                        const InitialDistribution& nu);

std::vector<double> mean_policy_values(const AttackMdp& base,
                                       std::span<const Deployment> deployments,
                                       std::span<const Policy> policies,
                                       const InitialDistribution& nu);

std::vector<Policy> belief_policies(const AttackMdp& base,
                                    std::span<const BeliefVector> beliefs);

std::uint64_t rollout_successes(const RolloutTask& task, std::uint64_t trials);

}  // namespace omp

// Worker count used by the OpenMP kernels; honours CTR_THREADS.
int worker_count();
void apply_thread_limit_from_env();

}  // namespace ctr::kernels
