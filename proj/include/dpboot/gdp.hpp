#pragma once

#include <vector>

#include "dpboot/rng.hpp"
#include "dpboot/tradeoff.hpp"

namespace dpboot {

// Gaussian differential privacy budget. mu must be positive and finite.
struct PrivacyBudget {
  double mu = 0.0;
};

// Classical (epsilon, delta) differential privacy parameters.
struct DPParameters {
  double epsilon = 0.0;
  double delta = 0.0;
};

struct GaussianMechanismSpec {
  double sensitivity = 0.0;  // l2 sensitivity of the statistic, >= 0
  PrivacyBudget budget;      // per release
};

void validate(const PrivacyBudget& budget);
void validate(const DPParameters& params);

// Trade-off curve of the Gaussian mechanism, G_mu(a) = Phi(Phi^-1(1-a) - mu).
// mu = 0 degenerates to the identity curve (perfect privacy).
TradeoffCurve gaussian_tradeoff(double mu);

// Adds iid N(0, (sensitivity/mu)^2) noise per coordinate. A zero sensitivity
// returns the input unchanged.
std::vector<double> gaussian_mechanism(const std::vector<double>& value,
                                       const GaussianMechanismSpec& spec, Rng& rng);

// Composition: sqrt of the sum of squares. Rejects an empty list.
double compose_gdp(const std::vector<double>& mus);

// Group privacy at group size k >= 1: k * mu.
double group_privacy(double mu, int k);

// delta(eps, mu) = Phi(-eps/mu + mu/2) - e^eps Phi(-eps/mu - mu/2).
double gdp_to_dp_delta(double mu, double epsilon);

// Smallest epsilon with gdp_to_dp_delta(mu, epsilon) <= delta, by bisection
// over [0, 500] to 1e-9. Throws InfeasibleError when delta >= delta(0, mu)
// would make epsilon negative, or when even epsilon = 500 cannot reach delta.
double solve_epsilon(double mu, double delta);

// Largest mu with gdp_to_dp_delta(mu, epsilon) <= delta, by bisection over
// [1e-9, 100] to 1e-9. Throws InfeasibleError when no mu in range qualifies.
double solve_mu(double epsilon, double delta);

}  // namespace dpboot
