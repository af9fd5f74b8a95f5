#include <gtest/gtest.h>

#include <cmath>

#include "ctr/demo.hpp"
#include "ctr/error.hpp"
#include "ctr/simulate.hpp"
#include "ctr/solvers.hpp"
#include "ctr/synthetic.hpp"

namespace ctr {
namespace {

// Pearson statistic of draws against d.pmf on 0..cap-1 plus a pooled tail.
template <class Draw>
double chi_square(const StepDistribution& d, std::size_t cap, int n, Draw draw) {
  std::vector<double> counts(cap + 1, 0.0);
  for (int i = 0; i < n; ++i) counts[std::min(draw(), cap)] += 1.0;
  double chi = 0.0;
  for (std::size_t k = 0; k <= cap; ++k) {
    const double p = k < cap ? d.pmf(k) : d.survival(cap);
    chi += (counts[k] - n * p) * (counts[k] - n * p) / (n * p);
  }
  return chi;
}

TEST(Simulate, RaceBudgetIsGeometric) {
  const auto d = StepDistribution::geometric(2.0, 1.0);
  Rng rng(1);
  // 8 bins, 7 degrees of freedom: 0.999 quantile 24.32.
  EXPECT_LT(chi_square(d, 7, 100000, [&] { return draw_race_budget(d, kNoCap, rng); }), 24.32);
  EXPECT_THROW(draw_race_budget(demo_distribution(), kNoCap, rng), Error);
}

TEST(Simulate, StepBudgetFollowsTable) {
  const auto d = demo_distribution();
  Rng rng(2);
  std::vector<double> counts(5, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[draw_step_budget(d, kNoCap, rng)] += 1.0;
  EXPECT_EQ(counts[0], 0.0);
  EXPECT_EQ(counts[4], 0.0);
  EXPECT_NEAR(counts[1] / n, 0.2, 0.005);
  EXPECT_NEAR(counts[2] / n, 0.45, 0.005);
  EXPECT_NEAR(counts[3] / n, 0.35, 0.005);
  Rng capped(3);
  for (int i = 0; i < 1000; ++i) EXPECT_LE(draw_step_budget(d, 2, capped), 2u);
}

TEST(Simulate, StepBudgetGeometric) {
  const auto d = StepDistribution::geometric(1.0, 0.6);
  Rng rng(4);
  EXPECT_LT(chi_square(d, 7, 100000, [&] { return draw_step_budget(d, kNoCap, rng); }), 24.32);
}

TEST(Simulate, RoundOutcomes) {
  AttackMdp m(demo_graph(), demo_distribution());
  const auto x = Deployment::of({1});
  const auto pi = best_response(m);  // heads for B
  Rng rng(5);
  const auto det = simulate_round(m, x, pi, 0, SimMode::StepCount, rng);
  EXPECT_EQ(det.kind, RolloutOutcome::Kind::Detected);
  EXPECT_EQ(det.node, 1u);
  const auto on = simulate_round(m, x, pi, 1, SimMode::StepCount, rng);
  EXPECT_EQ(on.kind, RolloutOutcome::Kind::Detected);
  EXPECT_EQ(on.steps, 0u);
  const auto at = simulate_round(m, x, pi, 5, SimMode::StepCount, rng);
  EXPECT_EQ(at.kind, RolloutOutcome::Kind::Success);
}

TEST(Simulate, AgreesWithAnalyticValue) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = random_dag({.nodes = 8, .edge_probability = 0.4}, seed);
    AttackMdp base(g, StepDistribution::geometric(1.5, 1.0));
    const auto nu = InitialDistribution::uniform_non_target(base);
    const auto x = Deployment::of({g.spot().front()});
    const auto m = base.with_deployment(x);
    const auto pi = best_response(m);
    const double analytic = initial_value(pi.value, nu);
    for (auto mode : {SimMode::StepCount, SimMode::Continuous}) {
      const auto e = estimate_success(base, x, pi, nu, mode, 40000, seed);
      EXPECT_LE(std::abs(e.frequency - analytic), 4.0 * e.stderr_ + 1e-12) << seed;
    }
  }
}

TEST(Simulate, Reproducible) {
  AttackMdp m(demo_graph(), demo_distribution());
  const auto nu = InitialDistribution::uniform_non_target(m);
  const auto pi = best_response(m);
  const Deployment none = Deployment::of({});
  const auto a = estimate_success(m, none, pi, nu, SimMode::StepCount, 5000, 9);
  const auto b = estimate_success(m, none, pi, nu, SimMode::StepCount, 5000, 9);
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_THROW(estimate_success(m, none, pi, nu, SimMode::Continuous, 10, 9), Error);
}

TEST(Simulate, EstimateAndZ) {
  const auto e = make_estimate(300, 1000, 1);
  EXPECT_DOUBLE_EQ(e.frequency, 0.3);
  EXPECT_NEAR(e.stderr_, std::sqrt(0.21 / 1000), 1e-15);
  EXPECT_NEAR(e.ci_low, 0.3 - 1.96 * e.stderr_, 1e-15);
  const auto f = make_estimate(350, 1000, 2);
  // pooled p = 0.325
  const double se = std::sqrt(0.325 * 0.675 * (2.0 / 1000));
  EXPECT_NEAR(two_proportion_z(e, f), -0.05 / se, 1e-12);
  EXPECT_EQ(two_proportion_z(make_estimate(0, 10, 0), make_estimate(0, 20, 0)), 0.0);
  EXPECT_EQ(parse_sim_mode("continuous-time"), SimMode::Continuous);
}

}  // namespace
}  // namespace ctr
