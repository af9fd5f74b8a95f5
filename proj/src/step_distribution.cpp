#include "ctr/step_distribution.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <string>

#include "ctr/error.hpp"

namespace ctr {

StepDistribution StepDistribution::geometric(double lambda_attacker,
                                             double lambda_defender) {
  auto valid = [](double r) { return std::isfinite(r) && r > 0.0; };
  if (!valid(lambda_attacker) || !valid(lambda_defender)) {
    throw Error(ErrorCode::NonPositiveRate,
                "rates must be positive and finite (got " +
                    std::to_string(lambda_attacker) + ", " +
                    std::to_string(lambda_defender) + ")");
  }
  StepDistribution d;
  d.kind_ = Kind::Geometric;
  d.lambda_attacker_ = lambda_attacker;
  d.lambda_defender_ = lambda_defender;
  d.p_ = lambda_defender / (lambda_attacker + lambda_defender);
  return d;
}

StepDistribution StepDistribution::explicit_survival(std::vector<double> survival,
                                                     double tail) {
  if (survival.empty() || survival.front() != 1.0) {
    throw Error(ErrorCode::InvalidDistribution, "survival table must start with 1");
  }
  for (std::size_t i = 0; i < survival.size(); ++i) {
    double s = survival[i];
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Error(ErrorCode::InvalidDistribution,
                  "survival value out of [0,1] at n=" + std::to_string(i));
    }
    if (i > 0 && s > survival[i - 1]) {
      throw Error(ErrorCode::InvalidDistribution,
                  "survival table increases at n=" + std::to_string(i));
    }
  }
  if (!(tail >= 0.0 && tail <= survival.back())) {
    throw Error(ErrorCode::InvalidDistribution,
                "tail must lie in [0, S(n_max)]");
  }
  StepDistribution d;
  d.kind_ = Kind::ExplicitSurvival;
  d.table_ = std::move(survival);
  d.tail_ = tail;
  return d;
}

StepDistribution StepDistribution::from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) {
    throw Error(ErrorCode::InvalidConfig, "distribution needs a 'kind'");
  }
  const auto kind = spec.at("kind").get<std::string>();
  if (kind == "geometric") {
    return geometric(spec.value("lambda_attacker", 0.0),
                     spec.value("lambda_defender", 0.0));
  }
  if (kind == "table") {
    if (!spec.contains("survival")) {
      throw Error(ErrorCode::InvalidConfig, "table distribution needs 'survival'");
    }
    return explicit_survival(spec.at("survival").get<std::vector<double>>(),
                             spec.value("tail", 0.0));
  }
  throw Error(ErrorCode::InvalidConfig, "unknown distribution kind '" + kind + "'");
}

nlohmann::json StepDistribution::to_json() const {
  if (is_geometric()) {
    return {{"kind", "geometric"},
            {"lambda_attacker", lambda_attacker_},
            {"lambda_defender", lambda_defender_}};
  }
  return {{"kind", "table"}, {"survival", table_}, {"tail", tail_}};
}

double StepDistribution::survival(std::size_t n) const {
  if (is_geometric()) {
    const double q = lambda_attacker_ / (lambda_attacker_ + lambda_defender_);
    return std::pow(q, static_cast<double>(n));
  }
  return n < table_.size() ? table_[n] : tail_;
}

double StepDistribution::pmf(std::size_t n) const {
  if (is_geometric()) {
    const double q = lambda_attacker_ / (lambda_attacker_ + lambda_defender_);
    return p_ * std::pow(q, static_cast<double>(n));
  }
  return survival(n) - survival(n + 1);
}

double StepDistribution::conditional_advance(std::size_t c) const {
  if (is_geometric()) {
    return lambda_attacker_ / (lambda_attacker_ + lambda_defender_);
  }
  const double s = survival(c);
  if (s == 0.0) {
    throw Error(ErrorCode::ZeroConditioningMass,
                "Pr(N >= " + std::to_string(c) + ") = 0");
  }
  return survival(c + 1) / s;
}

double mixture_pmf_oracle(double lambda_attacker, double lambda_defender,
                          std::size_t n) {
  auto valid = [](double r) { return std::isfinite(r) && r > 0.0; };
  if (!valid(lambda_attacker) || !valid(lambda_defender)) {
    throw Error(ErrorCode::NonPositiveRate, "rates must be positive and finite");
  }
  const double nn = static_cast<double>(n);
  const double log_fact = std::lgamma(nn + 1.0);
  // Poisson(lambda t) mass at n times the Exp(lambda_D) density at t.
  auto integrand = [&](double t) {
    if (t <= 0.0) return n == 0 ? lambda_defender : 0.0;
    const double log_poisson =
        nn * std::log(lambda_attacker * t) - log_fact - lambda_attacker * t;
    return std::exp(log_poisson - lambda_defender * t) * lambda_defender;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double value = integrator.integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-13, &error,
      &l1, &levels);
  if (!std::isfinite(value) || error > 1e-9 * std::max(1.0, std::abs(value))) {
    throw Error(ErrorCode::QuadratureNotConverged,
                "error estimate " + std::to_string(error) + " for n=" +
                    std::to_string(n));
  }
  return value;
}

}  // namespace ctr
