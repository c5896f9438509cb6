#pragma once

#include <optional>
#include <vector>

#include "dpboot/bootstrap.hpp"
#include "dpboot/estimators.hpp"
#include "dpboot/rng.hpp"

namespace dpboot {

// Scale convention for the candidate intervals I_t.
enum class IntervalScale {
  kCiScale,    // hit test sqrt(n)(theta_hat - theta*) in [-t, t], CI half width t/sqrt(n)
  kVerbatim,   // hit test in [-t sqrt(n), t sqrt(n)], CI half width t
};

struct BLBConfig {
  double epsilon = 0.0;   // quantile release budget
  double delta = 0.0;     // for the Gaussian mechanism on the estimates
  int B = 500;            // resamples per bag
  double alpha = 0.1;     // 1 - alpha is the target level
  double b_sigma = 5.0;   // dispersion constant sizing the candidate grid
  IntervalScale interval_scale = IntervalScale::kCiScale;
  bool zero_noise = false;  // test mode: no Gaussian noise on estimates
};

struct BLBParams {
  int s = 0;  // bag count, min(max(2, floor(10 ln(n) / eps)), n)
  int T = 0;  // candidate count, ceil(5 b_sigma sqrt(n))
};

BLBParams blb_params(std::size_t n, double epsilon, double b_sigma);

// Sparse-vector style search: for each candidate t the hit fractions of the
// s bags are sorted and the order statistic at floor(xi0 + xi_t) is compared
// against tau; indices below 1 read as -inf, above s as +inf. Returns the
// first accepted t (1-based), or nullopt when none is.
std::optional<int> above_threshold(const std::vector<std::vector<double>>& votes_by_t,
                                   double tau, double xi0, const std::vector<double>& xi_t);

struct BLBQuantResult {
  ConfidenceInterval interval;
  std::vector<double> theta_bar;        // privatized full-sample estimate
  std::vector<std::optional<int>> t_bar;  // accepted candidate per coordinate
};

// Bag-level bootstrap quantile release: s disjoint bags of size floor(n/s),
// B resamples of size n per bag privatized at mu~ solving
// delta(epsilon, mu~) = delta, hit fractions against nested candidates,
// AboveThreshold with xi0 ~ Lap(s/2, 2/eps) and xi_t ~ Lap(0, 4/eps).
// A bottom search yields (-inf, inf) on that coordinate.
BLBQuantResult blbquant_ci(const Sample& data, const EstimatorSpec& estimator,
                           const BLBConfig& config, Rng& rng);

}  // namespace dpboot
