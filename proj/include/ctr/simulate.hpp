#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

#include "ctr/mdp.hpp"
#include "ctr/random.hpp"

namespace ctr {

enum class SimMode {
  // Draw N from the step distribution, then walk up to N edges.
  StepCount,
  // Race an Exp(lambda_D) idle period against Poisson(lambda) step events.
  // Geometric distributions only.
  Continuous,
};

std::string_view to_string(SimMode m) noexcept;
SimMode parse_sim_mode(std::string_view name);

struct RolloutOutcome {
  enum class Kind { Success, Detected, Expired };
  Kind kind = Kind::Expired;
  NodeId node = 0;        // final node
  std::size_t steps = 0;  // edges traversed
};

inline constexpr std::size_t kNoCap = std::numeric_limits<std::size_t>::max();

// N = #{n >= 1 : u < S(n)} for one uniform u, capped at `cap`.
std::size_t draw_step_budget(const StepDistribution& d, std::size_t cap, Rng& rng);
// Number of Poisson(lambda) events before an Exp(lambda_D) deadline,
// capped at `cap`.
std::size_t draw_race_budget(const StepDistribution& d, std::size_t cap, Rng& rng);

// One round from `start` under deployment x, following pi. `m` supplies the
// graph, the step law and the state layout pi is indexed by.
RolloutOutcome simulate_round(const AttackMdp& m, const Deployment& x,
                              const Policy& pi, NodeId start, SimMode mode,
                              Rng& rng);

// Everything a batch of independent rollouts needs. Trial t follows
// policies[t % policies.size()], so a policy set is simulated as the
// uniform mixture of its members.
struct RolloutTask {
  const AttackMdp* mdp = nullptr;
  const Deployment* deployment = nullptr;
  std::span<const Policy> policies;
  const InitialDistribution* nu = nullptr;
  SimMode mode = SimMode::StepCount;
  std::uint64_t seed = 0;
};

// Trial t: start drawn from nu, then one round, all from substream
// (seed, Rollout, t).
RolloutOutcome run_trial(const RolloutTask& task, std::uint64_t t);

struct SimEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double frequency = 0.0;
  double stderr_ = 0.0;  // sqrt(f(1-f)/trials)
  double ci_low = 0.0;   // frequency -/+ 1.96 stderr, clipped to [0,1]
  double ci_high = 0.0;
  std::uint64_t seed = 0;
};

SimEstimate make_estimate(std::uint64_t successes, std::uint64_t trials,
                          std::uint64_t seed);

SimEstimate estimate_success(const AttackMdp& m, const Deployment& x,
                             const Policy& pi, const InitialDistribution& nu,
                             SimMode mode, std::uint64_t trials,
                             std::uint64_t seed);
SimEstimate estimate_success(const AttackMdp& m, const Deployment& x,
                             std::span<const Policy> policies,
                             const InitialDistribution& nu, SimMode mode,
                             std::uint64_t trials, std::uint64_t seed);

// Two-proportion z statistic with pooled variance; 0 when both are
// degenerate at the same value.
double two_proportion_z(const SimEstimate& a, const SimEstimate& b);

}  // namespace ctr
