#include <gtest/gtest.h>

#include <omp.h>

#include "ctr/error.hpp"
#include "ctr/kernels.hpp"
#include "ctr/solvers.hpp"
#include "ctr/synthetic.hpp"

namespace ctr {
namespace {

// Forces several workers even on a single-core host, so the OpenMP paths
// actually interleave.
class Kernels : public ::testing::Test {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(4);
  }
  void TearDown() override { omp_set_num_threads(saved_); }
  int saved_ = 1;
};

struct Case {
  AttackMdp base;
  std::vector<Deployment> deployments;
  InitialDistribution nu;
  std::vector<BeliefVector> beliefs;
};

Case make_case(std::uint64_t seed) {
  const auto g = random_dag({.nodes = 9, .edge_probability = 0.4}, seed);
  Rng rng(seed);
  AttackMdp base(g, random_distribution(rng));
  auto deps = enumerate_deployments(base.graph(), 2);
  auto nu = InitialDistribution::uniform_non_target(base);
  DirichletParams p{std::vector<double>(g.spot().size(), 1.0), 16, seed};
  return {std::move(base), std::move(deps), std::move(nu), sample_beliefs(g, p)};
}

TEST_F(Kernels, BestResponseValuesIdentical) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = make_case(seed);
    EXPECT_EQ(kernels::serial::best_response_values(c.base, c.deployments, c.nu),
              kernels::omp::best_response_values(c.base, c.deployments, c.nu));
  }
}

TEST_F(Kernels, PolicyKernelsIdentical) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = make_case(seed);
    const auto ps = kernels::serial::belief_policies(c.base, c.beliefs);
    const auto po = kernels::omp::belief_policies(c.base, c.beliefs);
    ASSERT_EQ(ps.size(), po.size());
    for (std::size_t k = 0; k < ps.size(); ++k) {
      EXPECT_EQ(ps[k].next, po[k].next);
      EXPECT_EQ(ps[k].value, po[k].value);
    }
    EXPECT_EQ(kernels::serial::fixed_policy_values(c.base, c.deployments, ps.front(), c.nu),
              kernels::omp::fixed_policy_values(c.base, c.deployments, ps.front(), c.nu));
    EXPECT_EQ(kernels::serial::mean_policy_values(c.base, c.deployments, ps, c.nu),
              kernels::omp::mean_policy_values(c.base, c.deployments, ps, c.nu));
  }
}

TEST_F(Kernels, RolloutCountsIdentical) {
  const auto c = make_case(3);
  const auto ps = kernels::serial::belief_policies(c.base, c.beliefs);
  for (auto mode : {SimMode::StepCount}) {
    RolloutTask task{&c.base, &c.deployments[1], ps, &c.nu, mode, 99};
    EXPECT_EQ(kernels::serial::rollout_successes(task, 20000),
              kernels::omp::rollout_successes(task, 20000));
  }
}

TEST_F(Kernels, MeanOfEqualValuesIsExact) {
  const auto c = make_case(1);
  const auto pi = best_response(c.base);
  std::vector<Policy> copies(7, pi);
  EXPECT_EQ(kernels::omp::mean_policy_values(c.base, c.deployments, copies, c.nu),
            kernels::omp::fixed_policy_values(c.base, c.deployments, pi, c.nu));
}

TEST_F(Kernels, ExceptionsPropagate) {
  const auto c = make_case(2);
  Policy broken = best_response(c.base);
  for (auto& n : broken.next) n = kNoAction;
  EXPECT_THROW(kernels::omp::fixed_policy_values(c.base, c.deployments, broken, c.nu), Error);
}

}  // namespace
}  // namespace ctr
