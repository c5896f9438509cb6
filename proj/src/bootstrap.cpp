#include "dpboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "dpboot/errors.hpp"
#include "dpboot/tradeoff_calculus.hpp"

namespace dpboot {

namespace {

std::vector<std::size_t> resample_indices(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = rng.uniform_below(n);
  return idx;
}

}  // namespace

int choose_m(int n, int B) {
  if (n < 2) throw ParameterError("choose_m: n must be >= 2");
  if (B < 2) throw ParameterError("choose_m: B must be >= 2");
  double ratio = std::log1p(-1.0 / B) / std::log1p(-1.0 / n);
  long m = std::lround(ratio);
  m = std::max(1L, std::min(static_cast<long>(n), m));
  return static_cast<int>(m);
}

BootstrapDraws empirical_bootstrap(const Sample& data, const EstimatorSpec& estimator,
                                   int B, Rng& rng) {
  data.validate();
  std::size_t n = data.size();
  if (n == 0) throw DataError("empirical_bootstrap: empty sample");
  if (B < 1) throw ParameterError("empirical_bootstrap: B must be >= 1");

  BootstrapDraws out;
  out.theta_bar = estimator.evaluate(data);
  std::size_t d = out.theta_bar.size();
  out.replicates.assign(d, std::vector<double>(static_cast<std::size_t>(B)));
  double root_n = std::sqrt(static_cast<double>(n));
  for (int b = 0; b < B; ++b) {
    Sample res = data.subset(resample_indices(n, n, rng));
    std::vector<double> theta_star = estimator.evaluate(res);
    for (std::size_t c = 0; c < d; ++c) {
      out.replicates[c][static_cast<std::size_t>(b)] = root_n * (theta_star[c] - out.theta_bar[c]);
    }
  }
  return out;
}

BootstrapDraws gdp_m_out_of_n_bootstrap(const Sample& data, const EstimatorSpec& estimator,
                                        const BootstrapConfig& config, Rng& rng) {
  data.validate();
  std::size_t n = data.size();
  if (n == 0) throw DataError("gdp bootstrap: empty sample");
  if (config.m < 1 || static_cast<std::size_t>(config.m) > n) {
    throw ParameterError("gdp bootstrap: m must lie in [1, n]");
  }
  if (config.B < 1) throw ParameterError("gdp bootstrap: B must be >= 1");
  if (!config.zero_noise) validate(config.budget);

  std::size_t m = static_cast<std::size_t>(config.m);
  BootstrapDraws out;
  out.mu_star = config.zero_noise
                    ? 0.0
                    : mu_b_star(config.m, static_cast<int>(n), config.B, config.budget.mu);
  out.estimate_noise_sd =
      config.zero_noise ? 0.0 : estimator.sensitivity(n) / config.budget.mu;
  out.replicate_noise_sd = config.zero_noise ? 0.0 : estimator.sensitivity(m) / out.mu_star;

  out.theta_bar = estimator.evaluate(data);
  std::size_t d = out.theta_bar.size();
  if (out.estimate_noise_sd > 0.0) {
    for (std::size_t c = 0; c < d; ++c) out.theta_bar[c] += rng.normal(0.0, out.estimate_noise_sd);
  }

  out.replicates.assign(d, std::vector<double>(static_cast<std::size_t>(config.B)));
  double root_m = std::sqrt(static_cast<double>(m));
  for (int b = 0; b < config.B; ++b) {
    Sample res = data.subset(resample_indices(n, m, rng));
    std::vector<double> theta_star = estimator.evaluate(res);
    for (std::size_t c = 0; c < d; ++c) {
      double noisy = theta_star[c];
      if (out.replicate_noise_sd > 0.0) noisy += rng.normal(0.0, out.replicate_noise_sd);
      out.replicates[c][static_cast<std::size_t>(b)] = root_m * (noisy - out.theta_bar[c]);
    }
  }
  return out;
}

ConfidenceInterval bootstrap_ci(const BootstrapDraws& draws, std::size_t n, double alpha) {
  if (draws.replicates.empty() || draws.replicates.front().empty()) {
    throw DataError("bootstrap_ci: no replicates");
  }
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw ParameterError("bootstrap_ci: alpha must lie in (0, 0.5)");
  }
  if (n == 0) throw ParameterError("bootstrap_ci: n must be positive");

  std::size_t B = draws.replicates.front().size();
  if (static_cast<double>(B) < 1.0 / alpha) {
    std::cerr << "warning: B = " << B << " cannot resolve the " << alpha
              << " quantile; interval falls back to the replicate range\n";
  }
  auto order_stat = [B](std::vector<double>& sorted, double gamma) {
    auto rank = static_cast<std::size_t>(std::ceil(static_cast<double>(B) * gamma));
    rank = std::clamp<std::size_t>(rank, 1, B);
    return sorted[rank - 1];
  };

  ConfidenceInterval ci;
  ci.level = 1.0 - 2.0 * alpha;
  double root_n = std::sqrt(static_cast<double>(n));
  for (std::size_t c = 0; c < draws.replicates.size(); ++c) {
    std::vector<double> sorted = draws.replicates[c];
    std::sort(sorted.begin(), sorted.end());
    double q_hi = order_stat(sorted, 1.0 - alpha);
    double q_lo = order_stat(sorted, alpha);
    ci.lower.push_back(draws.theta_bar[c] - q_hi / root_n);
    ci.upper.push_back(draws.theta_bar[c] - q_lo / root_n);
  }
  return ci;
}

}  // namespace dpboot
