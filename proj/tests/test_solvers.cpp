#include <gtest/gtest.h>

#include <cmath>

#include "ctr/demo.hpp"
#include "ctr/error.hpp"
#include "ctr/solvers.hpp"
#include "ctr/synthetic.hpp"

namespace ctr {
namespace {

AttackMdp random_mdp(std::uint64_t seed, std::size_t nodes = 8) {
  Rng rng = Rng::substream(seed, Stream::Synthetic, 777);
  return AttackMdp(random_dag({.nodes = nodes, .edge_probability = 0.4}, seed),
                   random_distribution(rng));
}

TEST(Solvers, EnumerationIsLexicographic) {
  const auto g = demo_graph();
  const auto d = enumerate_deployments(g, 2);
  ASSERT_EQ(d.size(), 6u);
  EXPECT_EQ(d[0].nodes, (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(d[1].nodes, (std::vector<NodeId>{1, 3}));
  EXPECT_EQ(d[5].nodes, (std::vector<NodeId>{3, 4}));
  EXPECT_EQ(enumerate_deployments(g, 0).size(), 1u);
  EXPECT_EQ(enumerate_deployments(g, 4).size(), 1u);
  EXPECT_THROW(enumerate_deployments(g, 5), Error);
  const auto big = high_redundancy_graph(10, 4, 4);
  EXPECT_THROW(enumerate_deployments(big, 8, 1000), Error);
}

TEST(Solvers, DemoRegimes) {
  AttackMdp m(demo_graph(), demo_distribution());
  const auto nu = InitialDistribution::point(m, 0);
  const auto st = solve_stackelberg(m, 1, nu);
  EXPECT_EQ(st.deployment.nodes, (std::vector<NodeId>{1}));
  EXPECT_NEAR(st.value, 0.8, 1e-12);
  for (const auto& row : st.table) EXPECT_NEAR(row.value, 0.8, 1e-12);

  const auto blind = solve_blind(m, 1, nu);
  EXPECT_EQ(blind.deployment.nodes, (std::vector<NodeId>{1}));
  EXPECT_EQ(blind.value, 0.0);

  DirichletParams p{{2000, 3000, 2500, 2500}, 500, 7};
  const auto dir = solve_dirichlet(m, 1, p, nu);
  EXPECT_EQ(dir.deployment.nodes, (std::vector<NodeId>{1}));
  ASSERT_EQ(dir.table.size(), 4u);
  EXPECT_NEAR(dir.table[0].value, 0.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(dir.table[i].value, 0.8, 1e-12);
  EXPECT_EQ(reevaluate(m, dir, nu), dir.value);
  EXPECT_EQ(reevaluate(m, st, nu), st.value);
}

// Exhaustive reference: min over deployments of max over attacker
// deterministic paths, from evaluate_policy on every path policy.
double brute_stackelberg(const AttackMdp& base, std::size_t h, const InitialDistribution& nu) {
  double best = 2.0;
  for (const auto& x : enumerate_deployments(base.graph(), h)) {
    const auto m = base.with_deployment(x);
    double total = 0.0;
    for (auto [s, w] : nu.weights) {
      const NodeId v = base.state(s).node;
      double top = base.graph().is_target(v) ? 1.0 : 0.0;
      for (const auto& p : enumerate_paths(base.graph(), v)) {
        if (p.size() < 2) continue;
        top = std::max(top, evaluate_policy(m, path_policy(m, p))[s]);
      }
      total += w * top;
    }
    best = std::min(best, total);
  }
  return best;
}

TEST(Solvers, StackelbergMatchesExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto m = random_mdp(seed);
    const auto nu = InitialDistribution::uniform_non_target(m);
    for (std::size_t h = 1; h <= std::min<std::size_t>(3, m.graph().spot().size()); ++h)
      EXPECT_NEAR(solve_stackelberg(m, h, nu).value, brute_stackelberg(m, h, nu), 1e-12);
  }
}

TEST(Solvers, StackelbergNonIncreasingInBudget) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto m = random_mdp(seed);
    const auto nu = InitialDistribution::uniform_non_target(m);
    double prev = 2.0;
    for (std::size_t h = 0; h <= m.graph().spot().size(); ++h) {
      const double v = solve_stackelberg(m, h, nu).value;
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(Solvers, DirichletNeverAboveStackelberg) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_mdp(seed, 7);
    const auto nu = InitialDistribution::uniform_non_target(m);
    const std::size_t h = 1 + seed % 2;
    const auto st = solve_stackelberg(m, h, nu);
    DirichletParams p{std::vector<double>(m.graph().spot().size(), 0.8), 40, seed};
    const auto dir = solve_dirichlet(m, h, p, nu);
    EXPECT_LE(dir.value, st.value);
    const auto mx = m.with_deployment(st.deployment);
    const double br = initial_value(best_response(mx).value, nu);
    for (const auto& pi : dir.policies) EXPECT_LE(initial_value(evaluate_policy(mx, pi), nu), br);
  }
}

TEST(Solvers, DirichletSamplesHaveExpectedMean) {
  const auto g = demo_graph();
  const std::vector<double> alpha{1.0, 2.0, 3.0, 4.0};
  DirichletParams p{alpha, 20000, 3};
  const auto beliefs = sample_beliefs(g, p);
  std::vector<double> mean(4, 0.0);
  for (const auto& b : beliefs) {
    double s = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      mean[i] += b.q[g.spot()[i]] / beliefs.size();
      s += b.q[g.spot()[i]];
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(mean[i], alpha[i] / 10.0, 0.005);
}

TEST(Solvers, DirichletReproducible) {
  const auto m = random_mdp(4);
  const auto nu = InitialDistribution::uniform_non_target(m);
  DirichletParams p{std::vector<double>(m.graph().spot().size(), 1.0), 30, 11};
  EXPECT_EQ(solve_dirichlet(m, 2, p, nu).value, solve_dirichlet(m, 2, p, nu).value);
  DirichletParams bad{{1.0}, 30, 11};
  EXPECT_THROW(solve_dirichlet(m, 2, bad, nu), Error);
}

TEST(Solvers, HoeffdingSampleSize) {
  auto oracle = [](double e, double d) {
    return static_cast<std::size_t>(std::ceil(std::log(2.0 / d) / (2.0 * e * e)));
  };
  EXPECT_EQ(hoeffding_sample_size(0.05, 0.05), 738u);
  EXPECT_EQ(hoeffding_sample_size(0.1, 0.1), 150u);
  for (double e : {0.01, 0.03, 0.2})
    for (double d : {0.01, 0.2}) EXPECT_EQ(hoeffding_sample_size(e, d), oracle(e, d));
  EXPECT_THROW(hoeffding_sample_size(0.0, 0.1), Error);
  EXPECT_THROW(hoeffding_sample_size(0.1, 1.0), Error);
}

TEST(Solvers, RegimeNames) {
  for (auto r : {Regime::Stackelberg, Regime::Blind, Regime::Dirichlet})
    EXPECT_EQ(parse_regime(to_string(r)), r);
  EXPECT_THROW(parse_regime("nash"), Error);
}

}  // namespace
}  // namespace ctr
