#include "dpboot/gdp.hpp"

#include <cmath>

#include "dpboot/errors.hpp"
#include "dpboot/normal.hpp"

namespace dpboot {

void validate(const PrivacyBudget& budget) {
  if (!(budget.mu > 0.0) || !std::isfinite(budget.mu)) {
    throw ParameterError("privacy budget: mu must be positive and finite");
  }
}

void validate(const DPParameters& params) {
  if (!(params.epsilon >= 0.0) || !std::isfinite(params.epsilon)) {
    throw ParameterError("dp parameters: epsilon must be finite and >= 0");
  }
  if (!(params.delta >= 0.0 && params.delta <= 1.0)) {
    throw ParameterError("dp parameters: delta must lie in [0, 1]");
  }
}

TradeoffCurve gaussian_tradeoff(double mu) { return TradeoffCurve::gaussian(mu); }

std::vector<double> gaussian_mechanism(const std::vector<double>& value,
                                       const GaussianMechanismSpec& spec, Rng& rng) {
  if (!(spec.sensitivity >= 0.0) || !std::isfinite(spec.sensitivity)) {
    throw ParameterError("gaussian mechanism: sensitivity must be finite and >= 0");
  }
  validate(spec.budget);
  if (spec.sensitivity == 0.0) return value;
  double sd = spec.sensitivity / spec.budget.mu;
  std::vector<double> out(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) out[i] = value[i] + rng.normal(0.0, sd);
  return out;
}

double compose_gdp(const std::vector<double>& mus) {
  if (mus.empty()) throw ParameterError("compose_gdp: needs at least one budget");
  double ss = 0.0;
  for (double m : mus) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw ParameterError("compose_gdp: budgets must be finite and >= 0");
    }
    ss += m * m;
  }
  return std::sqrt(ss);
}

double group_privacy(double mu, int k) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterError("group_privacy: mu must be positive and finite");
  }
  if (k < 1) throw ParameterError("group_privacy: group size must be >= 1");
  return static_cast<double>(k) * mu;
}

double gdp_to_dp_delta(double mu, double epsilon) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterError("gdp_to_dp_delta: mu must be positive and finite");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("gdp_to_dp_delta: epsilon must be finite and >= 0");
  }
  double first = normal_cdf(-epsilon / mu + 0.5 * mu);
  // exp(eps) * Phi(-eps/mu - mu/2) in log space to dodge overflow.
  double log_second = epsilon + log_normal_cdf(-epsilon / mu - 0.5 * mu);
  double delta = first - std::exp(log_second);
  return delta > 0.0 ? delta : 0.0;
}

namespace {
constexpr double kSolveTol = 1e-9;
constexpr double kEpsilonMax = 500.0;
constexpr double kMuMin = 1e-9;
constexpr double kMuMax = 100.0;
}  // namespace

double solve_epsilon(double mu, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("solve_epsilon: delta must lie in (0, 1)");
  }
  double at_zero = gdp_to_dp_delta(mu, 0.0);
  if (delta >= at_zero) {
    throw InfeasibleError("solve_epsilon: delta >= delta(0, mu), epsilon would be negative");
  }
  if (gdp_to_dp_delta(mu, kEpsilonMax) > delta) {
    throw InfeasibleError("solve_epsilon: delta unreachable below epsilon = 500");
  }
  double lo = 0.0, hi = kEpsilonMax;
  while (hi - lo > kSolveTol) {
    double mid = 0.5 * (lo + hi);
    (gdp_to_dp_delta(mu, mid) > delta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_mu(double epsilon, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("solve_mu: delta must lie in (0, 1)");
  }
  if (gdp_to_dp_delta(kMuMin, epsilon) > delta) {
    throw InfeasibleError("solve_mu: delta unreachable even at mu = 1e-9");
  }
  if (gdp_to_dp_delta(kMuMax, epsilon) <= delta) {
    throw InfeasibleError("solve_mu: every mu up to 100 satisfies delta; widen the range");
  }
  double lo = kMuMin, hi = kMuMax;
  while (hi - lo > kSolveTol) {
    double mid = 0.5 * (lo + hi);
    (gdp_to_dp_delta(mid, epsilon) <= delta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dpboot
