#include <gtest/gtest.h>

#include <cmath>

#include "ctr/error.hpp"
#include "ctr/step_distribution.hpp"

namespace ctr {
namespace {

// Composite Simpson on [0, 80 / lambda_D] of the Poisson(lambda t) pmf
// against the Exp(lambda_D) density; a second, crude quadrature kept
// separate from the library's.
double simpson_mixture(double la, double ld, std::size_t n) {
  const double upper = 80.0 / ld;
  const int m = 20000;
  const double step = upper / m;
  auto f = [&](double t) {
    const double lt = la * t;
    const double log_pois = n * std::log(lt > 0 ? lt : 1e-300) - lt - std::lgamma(n + 1.0);
    return ld * std::exp(-ld * t) * (t == 0.0 ? (n == 0 ? 1.0 : 0.0) : std::exp(log_pois));
  };
  double s = f(0) + f(upper);
  for (int i = 1; i < m; ++i) s += f(i * step) * (i % 2 ? 4.0 : 2.0);
  return s * step / 3.0;
}

TEST(StepDistribution, GeometricMatchesQuadrature) {
  const auto d = StepDistribution::geometric(2.0, 1.0);
  for (std::size_t n = 0; n <= 20; ++n) {
    EXPECT_NEAR(d.pmf(n), mixture_pmf_oracle(2.0, 1.0, n), 1e-6) << n;
    EXPECT_NEAR(d.pmf(n), simpson_mixture(2.0, 1.0, n), 1e-6) << n;
  }
}

TEST(StepDistribution, GeometricOtherRates) {
  for (auto [la, ld] : {std::pair{0.5, 3.0}, {4.0, 0.7}, {1.0, 1.0}}) {
    const auto d = StepDistribution::geometric(la, ld);
    for (std::size_t n = 0; n <= 12; ++n)
      EXPECT_NEAR(d.pmf(n), simpson_mixture(la, ld, n), 1e-6) << la << " " << ld << " " << n;
  }
}

TEST(StepDistribution, QuotedSurvivals) {
  const auto d = StepDistribution::geometric(2.0, 1.0);
  EXPECT_NEAR(d.success_parameter(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(d.survival(2), 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(d.survival(5), 32.0 / 243.0, 1e-15);
  EXPECT_NEAR(d.survival(2), 0.444, 5e-4);
  EXPECT_NEAR(d.survival(5), 0.132, 5e-4);
  EXPECT_EQ(d.survival(0), 1.0);
}

TEST(StepDistribution, ExplicitTable) {
  const auto d = StepDistribution::explicit_survival({1.0, 1.0, 0.8, 0.35}, 0.0);
  EXPECT_EQ(d.survival(3), 0.35);
  EXPECT_EQ(d.survival(4), 0.0);
  EXPECT_EQ(d.survival(100), 0.0);
  EXPECT_NEAR(d.pmf(2), 0.45, 1e-15);
  EXPECT_NEAR(d.conditional_advance(2), 0.35 / 0.8, 1e-15);
  EXPECT_THROW(d.conditional_advance(4), Error);
  const auto tailed = StepDistribution::explicit_survival({1.0, 0.5}, 0.25);
  EXPECT_EQ(tailed.survival(7), 0.25);
}

TEST(StepDistribution, Validation) {
  EXPECT_THROW(StepDistribution::geometric(0.0, 1.0), Error);
  EXPECT_THROW(StepDistribution::geometric(1.0, -2.0), Error);
  EXPECT_THROW(StepDistribution::explicit_survival({0.9}), Error);
  EXPECT_THROW(StepDistribution::explicit_survival({1.0, 0.3, 0.5}), Error);
  EXPECT_THROW(StepDistribution::explicit_survival({1.0, 0.3}, 0.4), Error);
  EXPECT_THROW(StepDistribution::explicit_survival({1.0, 1.2}), Error);
}

TEST(StepDistribution, JsonRoundTrip) {
  for (const auto& d : {StepDistribution::geometric(2.0, 1.0),
                        StepDistribution::explicit_survival({1.0, 0.6, 0.2}, 0.1)}) {
    const auto again = StepDistribution::from_json(d.to_json());
    EXPECT_EQ(again.to_json(), d.to_json());
    for (std::size_t n = 0; n < 8; ++n) EXPECT_EQ(again.survival(n), d.survival(n));
  }
  EXPECT_THROW(StepDistribution::from_json({{"kind", "poisson"}}), Error);
}

TEST(StepDistribution, PmfSumsToOne) {
  const auto d = StepDistribution::geometric(1.5, 0.5);
  double s = 0.0;
  for (std::size_t n = 0; n < 400; ++n) s += d.pmf(n);
  EXPECT_NEAR(s, 1.0, 1e-12);
}

}  // namespace
}  // namespace ctr
