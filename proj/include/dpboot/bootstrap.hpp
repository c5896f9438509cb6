#pragma once

#include <vector>

#include "dpboot/estimators.hpp"
#include "dpboot/gdp.hpp"
#include "dpboot/rng.hpp"

namespace dpboot {

struct BootstrapConfig {
  int m = 0;              // resample size; m = n is the full bootstrap
  int B = 0;              // replicate count
  PrivacyBudget budget;   // per stage
  bool zero_noise = false;  // test mode: keep the resampling, drop the noise
};

// Output of one bootstrap pass: the (privatized) point estimate and the
// centered, sqrt(m)-scaled replicates, per coordinate.
struct BootstrapDraws {
  std::vector<double> theta_bar;               // point estimate, noise included
  std::vector<std::vector<double>> replicates; // [coordinate][b]
  double mu_star = 0.0;                        // per-replicate budget used
  double estimate_noise_sd = 0.0;              // sd of the noise on theta_bar
  double replicate_noise_sd = 0.0;             // sd of the per-replicate noise
};

struct ConfidenceInterval {
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.0;
};

// Replicate budget that keeps every data point likely to appear in some
// resample: round(log(1 - 1/B) / log(1 - 1/n)), clamped to [1, n].
// Close to n/B. Requires n >= 2 and B >= 2.
int choose_m(int n, int B);

// Classical (non private) n-out-of-n bootstrap of sqrt(n)(theta* - theta_hat).
BootstrapDraws empirical_bootstrap(const Sample& data, const EstimatorSpec& estimator,
                                   int B, Rng& rng);

// Noisy m-out-of-n bootstrap: theta_bar = theta(data) + N(0, Delta(n)^2/mu^2)
// per coordinate, and B replicates sqrt(m)(theta*_m + Y_b - theta_bar) with
// Y_b of sd Delta(m)/mu*_B.
BootstrapDraws gdp_m_out_of_n_bootstrap(const Sample& data, const EstimatorSpec& estimator,
                                        const BootstrapConfig& config, Rng& rng);

// Equal-tailed interval from replicate order statistics,
// [theta_bar - q_{1-alpha}/sqrt(n), theta_bar - q_alpha/sqrt(n)] with
// q_g = replicate order statistic ceil(B g), 1-based. level = 1 - 2 alpha.
// When B < 1/alpha the extreme quantiles degenerate to the sample range;
// a warning is written to stderr.
ConfidenceInterval bootstrap_ci(const BootstrapDraws& draws, std::size_t n, double alpha);

}  // namespace dpboot
