#include <omp.h>

#include <cstdlib>
#include <exception>
#include <string>

#include "ctr/kernels.hpp"
#include "kernel_items.hpp"

namespace ctr::kernels {

namespace {

// Runs body(i) for i in [0, n) across the team; the first exception thrown
// by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr failure;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(ctr_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

int worker_count() {
  const char* env = std::getenv("CTR_THREADS");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

void apply_thread_limit_from_env() { omp_set_num_threads(worker_count()); }

namespace omp {

std::vector<double> best_response_values(const AttackMdp& base,
                                         std::span<const Deployment> deployments,
                                         const InitialDistribution& nu) {
  std::vector<double> out(deployments.size());
  parallel_for(deployments.size(), [&](std::size_t i) {
    out[i] = detail::best_response_value(base, deployments[i], nu);
  });
  return out;
}

std::vector<double> fixed_policy_values(const AttackMdp& base,
                                        std::span<const Deployment> deployments,
                                        const Policy& policy,
                                        const InitialDistribution& nu) {
  std::vector<double> out(deployments.size());
  parallel_for(deployments.size(), [&](std::size_t i) {
    out[i] = detail::fixed_policy_value(base, deployments[i], policy, nu);
  });
  return out;
}

std::vector<double> mean_policy_values(const AttackMdp& base,
                                       std::span<const Deployment> deployments,
                                       std::span<const Policy> policies,
                                       const InitialDistribution& nu) {
  std::vector<double> out(deployments.size());
  parallel_for(deployments.size(), [&](std::size_t i) {
    out[i] = detail::mean_policy_value(base, deployments[i], policies, nu);
  });
  return out;
}

std::vector<Policy> belief_policies(const AttackMdp& base,
                                    std::span<const BeliefVector> beliefs) {
  std::vector<Policy> out(beliefs.size());
  parallel_for(beliefs.size(), [&](std::size_t i) {
    out[i] = best_response(base.with_belief(beliefs[i]));
  });
  return out;
}

std::uint64_t rollout_successes(const RolloutTask& task, std::uint64_t trials) {
  // Integer counts make the reduction independent of the partition.
  std::exception_ptr failure;
  std::uint64_t successes = 0;
  const auto count = static_cast<long long>(trials);
#pragma omp parallel for schedule(static) reduction(+ : successes) num_threads(worker_count())
  for (long long t = 0; t < count; ++t) {
    try {
      if (run_trial(task, static_cast<std::uint64_t>(t)).kind == RolloutOutcome::Kind::Success)
        ++successes;
    } catch (...) {
#pragma omp critical(ctr_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return successes;
}

}  // namespace omp

}  // namespace ctr::kernels
