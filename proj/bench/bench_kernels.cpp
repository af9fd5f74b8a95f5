#include <benchmark/benchmark.h>

#include "ctr/kernels.hpp"
#include "ctr/solvers.hpp"
#include "ctr/synthetic.hpp"

namespace {

using namespace ctr;

struct Fixture {
  AttackMdp base;
  std::vector<Deployment> deployments;
  InitialDistribution nu;
  std::vector<BeliefVector> beliefs;
  std::vector<Policy> policies;

  static const Fixture& get() {
    static const Fixture f = [] {
      AttackMdp m(random_dag({.nodes = 16, .edge_probability = 0.3}, 42),
                  StepDistribution::geometric(2.0, 1.0));
      auto deps = enumerate_deployments(m.graph(), 2);
      auto nu = InitialDistribution::uniform_non_target(m);
      DirichletParams p{std::vector<double>(m.graph().spot().size(), 1.0), 64, 1};
      auto beliefs = sample_beliefs(m.graph(), p);
      auto pols = kernels::serial::belief_policies(m, beliefs);
      return Fixture{std::move(m), std::move(deps), std::move(nu), std::move(beliefs),
                     std::move(pols)};
    }();
    return f;
  }
};

template <auto Kernel>
void BM_BestResponse(benchmark::State& state) {
  const auto& f = Fixture::get();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.base, f.deployments, f.nu));
  state.SetItemsProcessed(state.iterations() * f.deployments.size());
}

template <auto Kernel>
void BM_MeanPolicy(benchmark::State& state) {
  const auto& f = Fixture::get();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.base, f.deployments, f.policies, f.nu));
  state.SetItemsProcessed(state.iterations() * f.deployments.size() * f.policies.size());
}

template <auto Kernel>
void BM_BeliefPolicies(benchmark::State& state) {
  const auto& f = Fixture::get();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.base, f.beliefs));
  state.SetItemsProcessed(state.iterations() * f.beliefs.size());
}

template <auto Kernel>
void BM_Rollouts(benchmark::State& state) {
  const auto& f = Fixture::get();
  RolloutTask task{&f.base, &f.deployments.front(), f.policies, &f.nu, SimMode::StepCount, 3};
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(task, trials));
  state.SetItemsProcessed(state.iterations() * trials);
}

BENCHMARK(BM_BestResponse<kernels::serial::best_response_values>)->Name("best_response/serial");
BENCHMARK(BM_BestResponse<kernels::omp::best_response_values>)->Name("best_response/omp");
BENCHMARK(BM_MeanPolicy<kernels::serial::mean_policy_values>)->Name("mean_policy/serial");
BENCHMARK(BM_MeanPolicy<kernels::omp::mean_policy_values>)->Name("mean_policy/omp");
BENCHMARK(BM_BeliefPolicies<kernels::serial::belief_policies>)->Name("belief_policies/serial");
BENCHMARK(BM_BeliefPolicies<kernels::omp::belief_policies>)->Name("belief_policies/omp");
BENCHMARK(BM_Rollouts<kernels::serial::rollout_successes>)->Name("rollouts/serial")->Arg(100000);
BENCHMARK(BM_Rollouts<kernels::omp::rollout_successes>)->Name("rollouts/omp")->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
