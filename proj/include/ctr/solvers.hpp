#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ctr/mdp.hpp"
#include "ctr/random.hpp"

namespace ctr {

enum class Regime { Stackelberg, Blind, Dirichlet };

std::string_view to_string(Regime r) noexcept;
Regime parse_regime(std::string_view name);

struct DirichletParams {
  std::vector<double> alpha;  // one concentration per node of g.spot()
  std::size_t samples = 1;    // K
  std::uint64_t seed = 0;
};

// One Dir(alpha) draw over V_spot via normalised Gamma(alpha_i, 1)
// variates. Retries a zero total up to 100 times, then DegenerateSample.
BeliefVector sample_dirichlet(const AttackGraph& g, std::span<const double> alpha,
                              Rng& rng);

// K beliefs; draw k uses substream (seed, Dirichlet, k).
std::vector<BeliefVector> sample_beliefs(const AttackGraph& g,
                                         const DirichletParams& params);

// All exactly-h subsets of V_spot in lexicographic order.
inline constexpr std::size_t kDefaultDeploymentLimit = 5'000'000;
std::vector<Deployment> enumerate_deployments(
    const AttackGraph& g, std::size_t h,
    std::size_t limit = kDefaultDeploymentLimit);

struct DeploymentValue {
  Deployment deployment;
  double value = 0.0;
};

struct RegimeSolution {
  Regime regime = Regime::Stackelberg;
  Deployment deployment;
  double value = 0.0;
  // Stackelberg: best response to the chosen deployment. Blind: the
  // uniform-belief policy. Dirichlet: one policy per sampled belief.
  std::vector<Policy> policies;
  std::vector<DeploymentValue> table;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t tied_states = 0;
  double wall_ms = 0.0;
};

// Defender minimises the best-responding attacker's value over all
// exactly-h deployments; ties go to the lexicographically smallest set.
RegimeSolution solve_stackelberg(const AttackMdp& base, std::size_t h,
                                 const InitialDistribution& nu);

// Attacker plans once against q(v) = h/|V_spot|; the defender then
// minimises the realized value of that fixed policy.
RegimeSolution solve_blind(const AttackMdp& base, std::size_t h,
                           const InitialDistribution& nu);

// Defender minimises the Monte-Carlo mean realized value of the K policies
// best-responding to sampled Dir(alpha) beliefs.
RegimeSolution solve_dirichlet(const AttackMdp& base, std::size_t h,
                               const DirichletParams& params,
                               const InitialDistribution& nu);
RegimeSolution solve_dirichlet(const AttackMdp& base, std::size_t h,
                               std::span<const BeliefVector> beliefs,
                               const InitialDistribution& nu);

// Realized value of the stored policies against the stored deployment.
double reevaluate(const AttackMdp& base, const RegimeSolution& solution,
                  const InitialDistribution& nu);

// Smallest K with K >= ln(2/delta) / (2 eps^2).
std::size_t hoeffding_sample_size(double epsilon, double delta);

}  // namespace ctr
