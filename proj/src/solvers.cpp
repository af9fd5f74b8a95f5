#include "ctr/solvers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "ctr/error.hpp"
#include "ctr/kernels.hpp"

namespace ctr {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_budget(const AttackGraph& g, std::size_t h) {
  if (h > g.spot().size()) {
    throw Error(ErrorCode::BudgetExceedsSpot,
                "budget " + std::to_string(h) + " exceeds |V_spot| = " +
                    std::to_string(g.spot().size()));
  }
}

// First index of the minimum; exact comparison, so ties keep the earliest
// (lexicographically smallest) deployment.
std::size_t argmin(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return best;
}

void fill_table(RegimeSolution& sol, std::vector<Deployment> deployments,
                const std::vector<double>& values) {
  const std::size_t best = argmin(values);
  sol.deployment = deployments[best];
  sol.value = values[best];
  sol.table.reserve(deployments.size());
  for (std::size_t i = 0; i < deployments.size(); ++i)
    sol.table.push_back({std::move(deployments[i]), values[i]});
}

}  // namespace

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Stackelberg: return "stackelberg";
    case Regime::Blind: return "blind";
    case Regime::Dirichlet: return "dirichlet";
  }
  return "unknown";
}

Regime parse_regime(std::string_view name) {
  if (name == "stackelberg") return Regime::Stackelberg;
  if (name == "blind") return Regime::Blind;
  if (name == "dirichlet") return Regime::Dirichlet;
  throw Error(ErrorCode::InvalidConfig, "unknown regime '" + std::string(name) + "'");
}

BeliefVector sample_dirichlet(const AttackGraph& g, std::span<const double> alpha,
                              Rng& rng) {
  if (alpha.size() != g.spot().size()) {
    throw Error(ErrorCode::ArgumentOutOfRange,
                "alpha has " + std::to_string(alpha.size()) + " entries for " +
                    std::to_string(g.spot().size()) + " spot nodes");
  }
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::ArgumentOutOfRange, "alpha entries must be positive");
    }
  }
  std::vector<double> y(alpha.size());
  for (int attempt = 0; attempt < 100; ++attempt) {
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      y[i] = rng.gamma(alpha[i]);
      total += y[i];
    }
    if (total > 0.0 && std::isfinite(total)) {
      for (auto& v : y) v /= total;
      return BeliefVector::from_spot_values(g, y);
    }
  }
  throw Error(ErrorCode::DegenerateSample, "Gamma variates summed to zero 100 times");
}

std::vector<BeliefVector> sample_beliefs(const AttackGraph& g,
                                         const DirichletParams& params) {
  std::vector<BeliefVector> out;
  out.reserve(params.samples);
  for (std::size_t k = 0; k < params.samples; ++k) {
    Rng rng = Rng::substream(params.seed, Stream::Dirichlet, k);
    out.push_back(sample_dirichlet(g, params.alpha, rng));
  }
  return out;
}

std::vector<Deployment> enumerate_deployments(const AttackGraph& g, std::size_t h,
                                              std::size_t limit) {
  check_budget(g, h);
  const auto& spot = g.spot();
  const std::size_t n = spot.size();
  double count = 1.0;
  for (std::size_t i = 0; i < h; ++i) count = count * double(n - i) / double(i + 1);
  if (count > static_cast<double>(limit)) {
    throw Error(ErrorCode::ArgumentOutOfRange,
                "C(" + std::to_string(n) + ", " + std::to_string(h) +
                    ") deployments exceed the enumeration limit");
  }
  std::vector<Deployment> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> idx(h);
  for (std::size_t i = 0; i < h; ++i) idx[i] = i;
  for (;;) {
    Deployment x;
    x.budget = h;
    for (auto i : idx) x.nodes.push_back(spot[i]);
    out.push_back(std::move(x));
    // Advance to the next combination in lexicographic order.
    std::size_t i = h;
    while (i > 0 && idx[i - 1] == n - h + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < h; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

RegimeSolution solve_stackelberg(const AttackMdp& base, std::size_t h,
                                 const InitialDistribution& nu) {
  const auto start = Clock::now();
  auto deployments = enumerate_deployments(base.graph(), h);
  const auto values = kernels::omp::best_response_values(base, deployments, nu);
  RegimeSolution sol;
  sol.regime = Regime::Stackelberg;
  fill_table(sol, std::move(deployments), values);
  sol.policies.push_back(best_response(base.with_deployment(sol.deployment)));
  sol.tied_states = sol.policies.front().tied_states;
  sol.wall_ms = elapsed_ms(start);
  return sol;
}

RegimeSolution solve_blind(const AttackMdp& base, std::size_t h,
                           const InitialDistribution& nu) {
  const auto start = Clock::now();
  const auto& g = base.graph();
  check_budget(g, h);
  const double q = static_cast<double>(h) / static_cast<double>(g.spot().size());
  Policy planned = best_response(base.with_belief(BeliefVector::uniform_on_spot(g, q)));
  auto deployments = enumerate_deployments(g, h);
  const auto values = kernels::omp::fixed_policy_values(base, deployments, planned, nu);
  RegimeSolution sol;
  sol.regime = Regime::Blind;
  fill_table(sol, std::move(deployments), values);
  sol.tied_states = planned.tied_states;
  sol.policies.push_back(std::move(planned));
  sol.wall_ms = elapsed_ms(start);
  return sol;
}

RegimeSolution solve_dirichlet(const AttackMdp& base, std::size_t h,
                               std::span<const BeliefVector> beliefs,
                               const InitialDistribution& nu) {
  const auto start = Clock::now();
  check_budget(base.graph(), h);
  if (beliefs.empty()) {
    throw Error(ErrorCode::ArgumentOutOfRange, "Dirichlet solver needs K >= 1");
  }
  // Policies depend on the belief only, so they are computed once and
  // reused for every candidate deployment.
  auto policies = kernels::omp::belief_policies(base, beliefs);
  auto deployments = enumerate_deployments(base.graph(), h);
  const auto values =
      kernels::omp::mean_policy_values(base, deployments, policies, nu);
  RegimeSolution sol;
  sol.regime = Regime::Dirichlet;
  fill_table(sol, std::move(deployments), values);
  sol.samples = beliefs.size();
  for (const auto& pi : policies) sol.tied_states += pi.tied_states;
  sol.policies = std::move(policies);
  sol.wall_ms = elapsed_ms(start);
  return sol;
}

RegimeSolution solve_dirichlet(const AttackMdp& base, std::size_t h,
                               const DirichletParams& params,
                               const InitialDistribution& nu) {
  const auto start = Clock::now();
  if (params.samples == 0) {
    throw Error(ErrorCode::ArgumentOutOfRange, "Dirichlet solver needs K >= 1");
  }
  check_budget(base.graph(), h);
  const auto beliefs = sample_beliefs(base.graph(), params);
  RegimeSolution sol = solve_dirichlet(base, h, beliefs, nu);
  sol.seed = params.seed;
  sol.wall_ms = elapsed_ms(start);
  return sol;
}

double reevaluate(const AttackMdp& base, const RegimeSolution& solution,
                  const InitialDistribution& nu) {
  const AttackMdp m = base.with_deployment(solution.deployment);
  long double total = 0.0L;
  for (const auto& pi : solution.policies) total += initial_value(evaluate_policy(m, pi), nu);
  if (solution.regime != Regime::Dirichlet) return static_cast<double>(total);
  return static_cast<double>(total / static_cast<long double>(solution.policies.size()));
}

std::size_t hoeffding_sample_size(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::ArgumentOutOfRange, "epsilon and delta must lie in (0,1)");
  }
  const double bound = std::log(2.0 / delta) / (2.0 * epsilon * epsilon);
  return static_cast<std::size_t>(std::ceil(bound));
}

}  // namespace ctr
