#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ctr/demo.hpp"
#include "ctr/error.hpp"
#include "ctr/mdp.hpp"
#include "ctr/random.hpp"
#include "ctr/synthetic.hpp"

namespace ctr {
namespace {

// Independent oracle: an attacker starting at v with a fresh counter can do
// no better than committing to one path, which succeeds with probability
// S(L) times the survival of every detection on the way.
double brute_value(const AttackGraph& g, const StepDistribution& d, NodeId v,
                   const std::vector<double>& q) {
  double best = 0.0;
  for (const auto& p : enumerate_paths(g, v)) {
    double val = d.survival(p.size() - 1);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) val *= 1.0 - q[p[i]];
    best = std::max(best, val);
  }
  if (g.is_target(v)) best = 1.0;
  return best;
}

struct Instance {
  AttackGraph g;
  StepDistribution d;
};

Instance random_instance(std::uint64_t seed, std::size_t nodes = 8) {
  Rng rng = Rng::substream(seed, Stream::Synthetic, 9999);
  return {random_dag({.nodes = nodes, .edge_probability = 0.4}, seed), random_distribution(rng)};
}

TEST(Mdp, LayoutAndHorizon) {
  AttackMdp m(demo_graph(), demo_distribution());
  EXPECT_EQ(m.horizon(), 3u);
  EXPECT_EQ(m.state_count(), 26u);
  EXPECT_EQ(m.at(2, 1), 9u);
  EXPECT_EQ(m.sink(), 24u);
  EXPECT_EQ(m.expired(), 25u);
  const auto s = m.state(m.at(4, 2));
  EXPECT_EQ(s.kind, MdpState::Kind::At);
  EXPECT_EQ(s.node, 4u);
  EXPECT_EQ(s.steps, 2u);
  EXPECT_TRUE(m.is_terminal(m.at(5, 0)));
  EXPECT_TRUE(m.is_terminal(m.sink()));
  EXPECT_EQ(m.actions(m.at(0, 0)).size(), 3u);
  EXPECT_NEAR(m.advance_probability(2), 0.4375, 1e-15);
}

TEST(Mdp, DemoValues) {
  AttackMdp m(demo_graph(), demo_distribution());
  const auto pi = best_response(m);
  EXPECT_NEAR(pi.value[m.at(0, 0)], 0.8, 1e-12);
  EXPECT_EQ(pi.next[m.at(0, 0)], 1u);  // ties go to the lowest successor
  const auto pstar = m.with_belief(BeliefVector::uniform_on_spot(m.graph(), 0.25));
  const std::vector<NodeId> b{0, 1, 5}, de{0, 3, 4, 5};
  EXPECT_NEAR(evaluate_policy(pstar, path_policy(pstar, b))[m.at(0, 0)], 0.6, 1e-12);
  EXPECT_NEAR(evaluate_policy(pstar, path_policy(pstar, de))[m.at(0, 0)], 0.196875, 1e-12);
  const auto x = m.with_deployment(Deployment::of({1}));
  EXPECT_NEAR(best_response(x).value[m.at(0, 0)], 0.8, 1e-12);
  EXPECT_EQ(best_response(x).next[m.at(0, 0)], 2u);
}

TEST(Mdp, ForcedPathEqualsSurvival) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto [g, d] = random_instance(seed);
    AttackMdp m(g, d);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      for (const auto& p : enumerate_paths(g, v)) {
        const auto pi = path_policy(m, p);
        const double val = evaluate_policy(m, pi)[m.at(p.front(), 0)];
        EXPECT_NEAR(val, d.survival(p.size() - 1), 1e-12);
        EXPECT_NEAR(val, path_value_oracle(g, d, p), 1e-12);
      }
    }
  }
}

TEST(Mdp, BestResponseMatchesPathEnumeration) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto [g, d] = random_instance(seed);
    AttackMdp base(g, d);
    Rng rng(seed);
    std::vector<double> q(g.node_count(), 0.0);
    for (auto v : g.spot()) q[v] = rng.uniform() < 0.4 ? rng.uniform() : 0.0;
    BeliefVector bel{q};
    const auto m = base.with_belief(bel);
    const auto pi = best_response(m);
    for (NodeId v = 0; v < g.node_count(); ++v)
      EXPECT_NEAR(pi.value[m.at(v, 0)], brute_value(g, d, v, q), 1e-12) << seed << " " << v;

    std::vector<NodeId> chosen;
    for (auto v : g.spot())
      if (rng.uniform() < 0.3) chosen.push_back(v);
    const auto x = Deployment::of(chosen);
    const auto mx = base.with_deployment(x);
    const auto px = best_response(mx);
    const auto qx = BeliefVector::indicator(g, x).q;
    for (NodeId v = 0; v < g.node_count(); ++v)
      EXPECT_NEAR(px.value[m.at(v, 0)], brute_value(g, d, v, qx), 1e-12);
  }
}

TEST(Mdp, EvaluateReproducesBestResponseExactly) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto [g, d] = random_instance(seed);
    AttackMdp m(g, d);
    const auto pi = best_response(m);
    EXPECT_EQ(evaluate_policy(m, pi), pi.value);
  }
}

TEST(Mdp, KernelRowsAreStochastic) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto [g, d] = random_instance(seed);
    AttackMdp base(g, d);
    std::vector<NodeId> half;
    for (std::size_t i = 0; i < g.spot().size(); i += 2) half.push_back(g.spot()[i]);
    const auto kernels = {base, base.with_deployment(Deployment::of(half)),
                          base.with_belief(BeliefVector::uniform_on_spot(g, 0.37))};
    for (const auto& m : kernels) {
      for (StateIndex s = 0; s < m.state_count(); ++s) {
        for (auto a : m.actions(s)) {
          double total = 0.0;
          for (const auto& t : m.transitions(s, a)) {
            EXPECT_GE(t.probability, 0.0);
            total += t.probability;
          }
          EXPECT_NEAR(total, 1.0, 1e-12);
        }
      }
    }
  }
}

TEST(Mdp, BeliefMonotonicity) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto [g, d] = random_instance(seed);
    AttackMdp base(g, d);
    Rng rng(seed + 100);
    std::vector<double> q(g.node_count(), 0.0);
    for (auto v : g.spot()) q[v] = 0.5 * rng.uniform();
    const auto lo = best_response(base.with_belief({q}));
    const NodeId v = g.spot()[rng.below(g.spot().size())];
    q[v] += 0.3 * rng.uniform();
    const auto hi = best_response(base.with_belief({q}));
    for (StateIndex s = 0; s < base.state_count(); ++s) EXPECT_LE(hi.value[s], lo.value[s]);
  }
}

TEST(Mdp, InitialDistributions) {
  AttackMdp m(demo_graph(), demo_distribution());
  const auto u = InitialDistribution::uniform_non_target(m);
  ASSERT_EQ(u.weights.size(), 5u);
  EXPECT_NEAR(u.weights[0].second, 0.2, 1e-15);
  const auto e = InitialDistribution::uniform_entries(m);
  ASSERT_EQ(e.weights.size(), 1u);
  EXPECT_EQ(e.weights[0].first, m.at(0, 0));
  const std::vector<std::pair<NodeId, double>> w{{1, 1.0}, {3, 3.0}};
  const auto f = InitialDistribution::from_node_weights(m, w);
  EXPECT_NEAR(f.weights[1].second, 0.75, 1e-15);
  const auto pi = best_response(m);
  EXPECT_NEAR(initial_value(pi.value, u), (0.8 + 1 + 1 + 0.8 + 1) / 5.0, 1e-12);
}

TEST(Mdp, Errors) {
  AttackMdp m(demo_graph(), demo_distribution());
  Deployment bad{{1, 2}, 1};
  EXPECT_THROW(m.with_deployment(bad), Error);
  const std::vector<NodeId> not_a_path{0, 4};
  EXPECT_THROW(path_policy(m, not_a_path), Error);
  Policy broken = best_response(m);
  broken.next[m.at(0, 0)] = 4;
  EXPECT_THROW(evaluate_policy(m, broken), Error);
}

}  // namespace
}  // namespace ctr
