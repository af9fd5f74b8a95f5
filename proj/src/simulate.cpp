#include "ctr/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctr/error.hpp"
#include "ctr/kernels.hpp"

namespace ctr {

std::string_view to_string(SimMode m) noexcept {
  return m == SimMode::StepCount ? "step-count" : "continuous";
}

SimMode parse_sim_mode(std::string_view name) {
  if (name == "step-count" || name == "steps") return SimMode::StepCount;
  if (name == "continuous" || name == "continuous-time") return SimMode::Continuous;
  throw Error(ErrorCode::InvalidConfig, "unknown simulation mode '" + std::string(name) + "'");
}

std::size_t draw_step_budget(const StepDistribution& d, std::size_t cap, Rng& rng) {
  const double u = rng.uniform();
  std::size_t n = 0;
  while (n < cap && u < d.survival(n + 1)) ++n;
  return n;
}

namespace {

void require_geometric(const StepDistribution& d) {
  if (!d.is_geometric()) {
    throw Error(ErrorCode::InvalidConfig,
                "continuous-time simulation needs a geometric step law");
  }
}

}  // namespace

std::size_t draw_race_budget(const StepDistribution& d, std::size_t cap, Rng& rng) {
  require_geometric(d);
  const double deadline = rng.exponential(d.lambda_defender());
  double t = 0.0;
  std::size_t n = 0;
  while (n < cap) {
    t += rng.exponential(d.lambda_attacker());
    if (t > deadline) break;
    ++n;
  }
  return n;
}

RolloutOutcome simulate_round(const AttackMdp& m, const Deployment& x,
                              const Policy& pi, NodeId start, SimMode mode,
                              Rng& rng) {
  using Kind = RolloutOutcome::Kind;
  const auto& g = m.graph();
  const auto& d = m.distribution();

  // Step-count mode fixes the budget up front; the race draws the idle
  // deadline and then one inter-arrival per attempted step.
  std::size_t budget = 0;
  double deadline = 0.0, clock = 0.0;
  if (mode == SimMode::StepCount) {
    budget = draw_step_budget(d, m.horizon() + 1, rng);
  } else {
    require_geometric(d);
    deadline = rng.exponential(d.lambda_defender());
  }

  NodeId v = start;
  std::size_t c = 0;
  if (x.contains(v)) return {Kind::Detected, v, 0};
  for (;;) {
    if (g.is_target(v)) return {Kind::Success, v, c};
    if (g.out_degree(v) == 0 || c >= m.horizon()) return {Kind::Expired, v, c};
    if (mode == SimMode::StepCount) {
      if (c >= budget) return {Kind::Expired, v, c};
    } else {
      clock += rng.exponential(d.lambda_attacker());
      if (clock > deadline) return {Kind::Expired, v, c};
    }
    const NodeId u = pi.next[m.at(v, c)];
    if (u == kNoAction || !g.has_edge(v, u)) {
      throw Error(ErrorCode::UndefinedAction,
                  "policy has no legal action at (" + g.display_name(v) + ", " +
                      std::to_string(c) + ")");
    }
    v = u;
    ++c;
    if (x.contains(v)) return {Kind::Detected, v, c};
  }
}

RolloutOutcome run_trial(const RolloutTask& task, std::uint64_t t) {
  Rng rng = Rng::substream(task.seed, Stream::Rollout, t);
  const auto& weights = task.nu->weights;
  const double u = rng.uniform();
  double acc = 0.0;
  StateIndex s = weights.back().first;
  for (const auto& [state, w] : weights) {
    acc += w;
    if (u < acc) {
      s = state;
      break;
    }
  }
  const NodeId start = task.mdp->state(s).node;
  const Policy& pi = task.policies[t % task.policies.size()];
  return simulate_round(*task.mdp, *task.deployment, pi, start, task.mode, rng);
}

SimEstimate make_estimate(std::uint64_t successes, std::uint64_t trials,
                          std::uint64_t seed) {
  SimEstimate e;
  e.trials = trials;
  e.successes = successes;
  e.seed = seed;
  if (trials == 0) return e;
  e.frequency = static_cast<double>(successes) / static_cast<double>(trials);
  e.stderr_ = std::sqrt(e.frequency * (1.0 - e.frequency) / static_cast<double>(trials));
  e.ci_low = std::max(0.0, e.frequency - 1.96 * e.stderr_);
  e.ci_high = std::min(1.0, e.frequency + 1.96 * e.stderr_);
  return e;
}

SimEstimate estimate_success(const AttackMdp& m, const Deployment& x,
                             const Policy& pi, const InitialDistribution& nu,
                             SimMode mode, std::uint64_t trials,
                             std::uint64_t seed) {
  return estimate_success(m, x, std::span<const Policy>(&pi, 1), nu, mode, trials, seed);
}

SimEstimate estimate_success(const AttackMdp& m, const Deployment& x,
                             std::span<const Policy> policies,
                             const InitialDistribution& nu, SimMode mode,
                             std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorCode::ArgumentOutOfRange, "trials must be >= 1");
  if (nu.weights.empty()) throw Error(ErrorCode::ArgumentOutOfRange, "empty initial distribution");
  if (policies.empty()) throw Error(ErrorCode::ArgumentOutOfRange, "no policy to simulate");
  for (const auto& pi : policies) {
    if (pi.next.size() != m.state_count()) {
      throw Error(ErrorCode::UndefinedAction, "policy does not match the MDP layout");
    }
  }
  if (mode == SimMode::Continuous) require_geometric(m.distribution());
  const RolloutTask task{&m, &x, policies, &nu, mode, seed};
  return make_estimate(kernels::omp::rollout_successes(task, trials), trials, seed);
}

double two_proportion_z(const SimEstimate& a, const SimEstimate& b) {
  const double n1 = static_cast<double>(a.trials), n2 = static_cast<double>(b.trials);
  const double pooled = static_cast<double>(a.successes + b.successes) / (n1 + n2);
  const double var = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2);
  if (var <= 0.0) return 0.0;
  return (a.frequency - b.frequency) / std::sqrt(var);
}

}  // namespace ctr
