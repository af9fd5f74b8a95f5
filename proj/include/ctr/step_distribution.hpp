#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

namespace ctr {

// Law of the per-round step budget N. Either the geometric marginal of a
// Poisson(lambda_attacker) step process run for an Exp(lambda_defender)
// idle period, or an explicit survival table S(0..n_max) with constant tail.
class StepDistribution {
 public:
  enum class Kind { Geometric, ExplicitSurvival };

  static StepDistribution geometric(double lambda_attacker,
                                    double lambda_defender);
  static StepDistribution explicit_survival(std::vector<double> survival,
                                            double tail = 0.0);
  static StepDistribution from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;

  Kind kind() const noexcept { return kind_; }
  bool is_geometric() const noexcept { return kind_ == Kind::Geometric; }

  double lambda_attacker() const noexcept { return lambda_attacker_; }
  double lambda_defender() const noexcept { return lambda_defender_; }
  // p = lambda_D / (lambda + lambda_D), the per-step stopping probability.
  double success_parameter() const noexcept { return p_; }

  const std::vector<double>& table() const noexcept { return table_; }
  double tail() const noexcept { return tail_; }

  // Pr(N >= n).
  double survival(std::size_t n) const;
  // Pr(N = n) = S(n) - S(n+1).
  double pmf(std::size_t n) const;
  // Pr(N >= c+1 | N >= c). Throws ZeroConditioningMass when S(c) = 0.
  double conditional_advance(std::size_t c) const;

 private:
  StepDistribution() = default;

  Kind kind_ = Kind::Geometric;
  double lambda_attacker_ = 0.0;
  double lambda_defender_ = 0.0;
  double p_ = 0.0;
  std::vector<double> table_;
  double tail_ = 0.0;
};

// Integrates the Poisson/exponential mixture for Pr(N = n) numerically.
// Independent of StepDistribution's closed form.
double mixture_pmf_oracle(double lambda_attacker, double lambda_defender,
                          std::size_t n);

}  // namespace ctr
