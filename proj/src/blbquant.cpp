#include "dpboot/blbquant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dpboot/errors.hpp"
#include "dpboot/gdp.hpp"

namespace dpboot {

BLBParams blb_params(std::size_t n, double epsilon, double b_sigma) {
  if (n < 2) throw ParameterError("blb_params: n must be >= 2");
  if (!(epsilon > 0.0)) throw ParameterError("blb_params: epsilon must be positive");
  if (!(b_sigma > 0.0)) throw ParameterError("blb_params: b_sigma must be positive");
  BLBParams p;
  auto s = static_cast<long>(std::floor(10.0 * std::log(static_cast<double>(n)) / epsilon));
  s = std::max(2L, s);
  s = std::min(static_cast<long>(n), s);
  p.s = static_cast<int>(s);
  p.T = static_cast<int>(std::ceil(5.0 * b_sigma * std::sqrt(static_cast<double>(n))));
  return p;
}

std::optional<int> above_threshold(const std::vector<std::vector<double>>& votes_by_t,
                                   double tau, double xi0, const std::vector<double>& xi_t) {
  if (votes_by_t.size() != xi_t.size()) {
    throw ParameterError("above_threshold: need one noise value per candidate");
  }
  for (std::size_t t = 0; t < votes_by_t.size(); ++t) {
    std::vector<double> sorted = votes_by_t[t];
    if (sorted.empty()) throw DataError("above_threshold: empty vote vector");
    std::sort(sorted.begin(), sorted.end());
    double pos = xi0 + xi_t[t];
    double v;
    if (pos < 1.0) {
      v = -std::numeric_limits<double>::infinity();
    } else if (pos > static_cast<double>(sorted.size())) {
      v = std::numeric_limits<double>::infinity();
    } else {
      auto idx = static_cast<std::size_t>(std::floor(pos));
      v = sorted[idx - 1];
    }
    if (v >= tau) return static_cast<int>(t) + 1;
  }
  return std::nullopt;
}

BLBQuantResult blbquant_ci(const Sample& data, const EstimatorSpec& estimator,
                           const BLBConfig& config, Rng& rng) {
  data.validate();
  std::size_t n = data.size();
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw ParameterError("blbquant: alpha must lie in (0, 1)");
  }
  if (config.B < 1) throw ParameterError("blbquant: B must be >= 1");
  BLBParams params = blb_params(n, config.epsilon, config.b_sigma);
  auto s = static_cast<std::size_t>(params.s);
  std::size_t bag_size = n / s;
  if (bag_size == 0) throw DataError("blbquant: bag size is zero, n too small for s bags");

  double mu_tilde = 0.0;
  if (!config.zero_noise) {
    mu_tilde = solve_mu(config.epsilon, config.delta);
  }
  double noise_sd = config.zero_noise ? 0.0 : estimator.sensitivity(n) / mu_tilde;

  // Disjoint bags from a seeded shuffle; the remainder past s*floor(n/s)
  // is left out, matching the subsample definition.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = rng.uniform_below(i + 1);
    std::swap(perm[i], perm[j]);
  }

  std::size_t d = estimator.dimension;
  double root_n = std::sqrt(static_cast<double>(n));
  double hit_scale = config.interval_scale == IntervalScale::kCiScale ? 1.0 : root_n;
  // abs_dev[c][bag] holds the sorted |sqrt(n)(theta_hat - theta*)| values.
  std::vector<std::vector<std::vector<double>>> abs_dev(
      d, std::vector<std::vector<double>>(s));

  for (std::size_t bag = 0; bag < s; ++bag) {
    std::vector<std::size_t> members(perm.begin() + static_cast<std::ptrdiff_t>(bag * bag_size),
                                     perm.begin() + static_cast<std::ptrdiff_t>((bag + 1) * bag_size));
    Sample bag_data = data.subset(members);
    std::vector<double> theta_hat = estimator.evaluate(bag_data);
    for (std::size_t c = 0; c < d; ++c) abs_dev[c][bag].reserve(static_cast<std::size_t>(config.B));
    std::vector<std::size_t> idx(n);
    for (int j = 0; j < config.B; ++j) {
      for (std::size_t k = 0; k < n; ++k) idx[k] = rng.uniform_below(bag_size);
      Sample res = bag_data.subset(idx);
      std::vector<double> theta_star = estimator.evaluate(res);
      for (std::size_t c = 0; c < d; ++c) {
        double noisy = theta_star[c];
        if (noise_sd > 0.0) noisy = noisy + rng.normal(0.0, noise_sd);
        abs_dev[c][bag].push_back(std::abs(root_n * (theta_hat[c] - noisy)));
      }
    }
    for (std::size_t c = 0; c < d; ++c) {
      std::sort(abs_dev[c][bag].begin(), abs_dev[c][bag].end());
    }
  }

  std::vector<double> theta_bar = estimator.evaluate(data);
  if (noise_sd > 0.0) {
    for (std::size_t c = 0; c < d; ++c) theta_bar[c] += rng.normal(0.0, noise_sd);
  }

  BLBQuantResult out;
  out.theta_bar = theta_bar;
  out.interval.level = 1.0 - config.alpha;
  double tau = 1.0 - config.alpha;
  auto T = static_cast<std::size_t>(params.T);
  for (std::size_t c = 0; c < d; ++c) {
    // Hit fraction of bag i at candidate t is the CDF of the sorted
    // deviations at t * hit_scale.
    std::vector<std::vector<double>> votes(T, std::vector<double>(s));
    for (std::size_t t = 0; t < T; ++t) {
      double edge = static_cast<double>(t + 1) * hit_scale;
      for (std::size_t bag = 0; bag < s; ++bag) {
        const auto& devs = abs_dev[c][bag];
        auto hits = static_cast<double>(
            std::upper_bound(devs.begin(), devs.end(), edge) - devs.begin());
        votes[t][bag] = hits / static_cast<double>(config.B);
      }
    }
    double xi0 = config.zero_noise ? static_cast<double>(s) / 2.0
                                   : rng.laplace(static_cast<double>(s) / 2.0, 2.0 / config.epsilon);
    std::vector<double> xi_t(T);
    for (std::size_t t = 0; t < T; ++t) {
      xi_t[t] = config.zero_noise ? 0.0 : rng.laplace(0.0, 4.0 / config.epsilon);
    }
    std::optional<int> t_bar = above_threshold(votes, tau, xi0, xi_t);
    out.t_bar.push_back(t_bar);
    if (t_bar.has_value()) {
      double half = config.interval_scale == IntervalScale::kCiScale
                        ? static_cast<double>(*t_bar) / root_n
                        : static_cast<double>(*t_bar);
      out.interval.lower.push_back(theta_bar[c] - half);
      out.interval.upper.push_back(theta_bar[c] + half);
    } else {
      out.interval.lower.push_back(-std::numeric_limits<double>::infinity());
      out.interval.upper.push_back(std::numeric_limits<double>::infinity());
    }
  }
  return out;
}

}  // namespace dpboot
