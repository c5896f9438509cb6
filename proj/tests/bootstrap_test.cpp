#include "dpboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dpboot/errors.hpp"
#include "dpboot/tradeoff_calculus.hpp"

namespace dpboot {
namespace {

Sample constant_sample(std::size_t n, double value) {
  Sample s;
  s.dim = 1;
  s.features.assign(n, value);
  return s;
}

// Two-sample Kolmogorov distance; both inputs are consumed sorted.
double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    double fa = static_cast<double>(i) / static_cast<double>(a.size());
    double fb = static_cast<double>(j) / static_cast<double>(b.size());
    worst = std::max(worst, std::abs(fa - fb));
  }
  return worst;
}

TEST(ChooseM, MatchesPrintedTriples) {
  EXPECT_EQ(choose_m(500, 100), 5);
  EXPECT_EQ(choose_m(500, 500), 1);
  EXPECT_EQ(choose_m(1000, 100), 10);
  EXPECT_EQ(choose_m(5000, 500), 10);
  EXPECT_EQ(choose_m(10000, 100), 100);
}

TEST(ChooseM, TracksRatioAndClamps) {
  // log(1 - 1/B) / log(1 - 1/n) = (n/B)(1 + 1/(2B) + ...) / (1 + 1/(2n) + ...),
  // so the result tracks n/B up to rounding plus a ratio/(2(min-1)) correction.
  for (int n : {500, 1000, 5000, 20000, 100000}) {
    for (int B : {100, 250, 500, 1000}) {
      if (n / B < 1) continue;
      double ratio = static_cast<double>(n) / B;
      double slack = 0.5 + ratio / (2.0 * (std::min(n, B) - 1)) + 1e-6;
      EXPECT_LE(std::abs(choose_m(n, B) - ratio), slack) << "n=" << n << " B=" << B;
    }
  }
  EXPECT_EQ(choose_m(2, 100000), 1);
  EXPECT_EQ(choose_m(2, 2), 1);
}

TEST(ChooseM, RejectsDegenerateInputs) {
  EXPECT_THROW(choose_m(1, 100), ParameterError);
  EXPECT_THROW(choose_m(100, 1), ParameterError);
}

TEST(EmpiricalBootstrap, ConstantDataGivesZeroReplicates) {
  Sample s = constant_sample(50, 2.5);
  EstimatorSpec mean = bounded_mean_estimator(-5.0, 5.0);
  Rng rng(1);
  BootstrapDraws draws = empirical_bootstrap(s, mean, 200, rng);
  EXPECT_DOUBLE_EQ(draws.theta_bar[0], 2.5);
  for (double r : draws.replicates[0]) EXPECT_DOUBLE_EQ(r, 0.0);
}

TEST(EmpiricalBootstrap, DeterministicUnderSeed) {
  Rng data_rng(9);
  Sample s = sample_truncated_normal(100, -5.0, 5.0, data_rng);
  EstimatorSpec mean = bounded_mean_estimator(-5.0, 5.0);
  Rng a(4), b(4);
  BootstrapDraws da = empirical_bootstrap(s, mean, 100, a);
  BootstrapDraws db = empirical_bootstrap(s, mean, 100, b);
  EXPECT_EQ(da.replicates, db.replicates);
}

TEST(EmpiricalBootstrap, ReplicateSpreadMatchesClt) {
  Rng data_rng(2);
  Sample s = sample_truncated_normal(10000, -8.0, 8.0, data_rng);
  EstimatorSpec mean = bounded_mean_estimator(-8.0, 8.0);
  Rng rng(3);
  BootstrapDraws draws = empirical_bootstrap(s, mean, 10000, rng);
  double sum = 0.0, sumsq = 0.0;
  for (double r : draws.replicates[0]) {
    sum += r;
    sumsq += r * r;
  }
  double b = static_cast<double>(draws.replicates[0].size());
  double sd = std::sqrt(sumsq / b - (sum / b) * (sum / b));
  EXPECT_NEAR(sd, 1.0, 0.05);
}

TEST(GdpBootstrap, NoisePlumbingIsExact) {
  Rng data_rng(7);
  Sample s = sample_truncated_normal(500, -5.0, 5.0, data_rng);
  EstimatorSpec mean = bounded_mean_estimator(-5.0, 5.0);
  BootstrapConfig config;
  config.m = 5;
  config.B = 100;
  config.budget.mu = 0.5 / std::sqrt(2.0);
  Rng rng(11);
  BootstrapDraws draws = gdp_m_out_of_n_bootstrap(s, mean, config, rng);
  EXPECT_DOUBLE_EQ(draws.mu_star, mu_b_star(5, 500, 100, config.budget.mu));
  EXPECT_DOUBLE_EQ(draws.estimate_noise_sd, mean.sensitivity(500) / config.budget.mu);
  EXPECT_DOUBLE_EQ(draws.replicate_noise_sd, mean.sensitivity(5) / draws.mu_star);

  // sd of Y_b equals sigma_{m,B} from the variance identity.
  double hit = 1.0 - std::pow(1.0 - 1.0 / 500.0, 5);
  double sigma2 = config.B * hit * (504.0 / 500.0) * 100.0 /
                  (5.0 * 500.0 * config.budget.mu * config.budget.mu);
  EXPECT_NEAR(draws.replicate_noise_sd * draws.replicate_noise_sd / sigma2, 1.0, 1e-12);
}

TEST(GdpBootstrap, ZeroNoiseKeepsEstimateExact) {
  Rng data_rng(13);
  Sample s = sample_truncated_normal(200, -5.0, 5.0, data_rng);
  EstimatorSpec mean = bounded_mean_estimator(-5.0, 5.0);
  BootstrapConfig config;
  config.m = 20;
  config.B = 50;
  config.zero_noise = true;
  Rng rng(17);
  BootstrapDraws draws = gdp_m_out_of_n_bootstrap(s, mean, config, rng);
  EXPECT_DOUBLE_EQ(draws.theta_bar[0], mean.evaluate(s)[0]);
  EXPECT_DOUBLE_EQ(draws.estimate_noise_sd, 0.0);
  EXPECT_DOUBLE_EQ(draws.replicate_noise_sd, 0.0);
}

TEST(GdpBootstrap, ConstantDataZeroNoiseGivesZeroReplicates) {
  Sample s = constant_sample(100, -1.0);
  EstimatorSpec mean = bounded_mean_estimator(-5.0, 5.0);
  BootstrapConfig config;
  config.m = 10;
  config.B = 40;
  config.zero_noise = true;
  Rng rng(19);
  BootstrapDraws draws = gdp_m_out_of_n_bootstrap(s, mean, config, rng);
  for (double r : draws.replicates[0]) EXPECT_DOUBLE_EQ(r, 0.0);
}

TEST(GdpBootstrap, DeterministicUnderSeed) {
  Rng data_rng(23);
  Sample s = sample_truncated_normal(300, -5.0, 5.0, data_rng);
  EstimatorSpec mean = bounded_mean_estimator(-5.0, 5.0);
  BootstrapConfig config;
  config.m = 3;
  config.B = 80;
  config.budget.mu = 0.4;
  Rng a(29), b(29);
  BootstrapDraws da = gdp_m_out_of_n_bootstrap(s, mean, config, a);
  BootstrapDraws db = gdp_m_out_of_n_bootstrap(s, mean, config, b);
  EXPECT_EQ(da.theta_bar, db.theta_bar);
  EXPECT_EQ(da.replicates, db.replicates);
}

TEST(GdpBootstrap, RejectsBadConfigs) {
  Sample s = constant_sample(10, 0.0);
  EstimatorSpec mean = bounded_mean_estimator(-5.0, 5.0);
  Rng rng(1);
  BootstrapConfig config;
  config.m = 11;          // larger than n
  config.B = 10;
  config.budget.mu = 0.5;
  EXPECT_THROW(gdp_m_out_of_n_bootstrap(s, mean, config, rng), ParameterError);
  config.m = 5;
  config.B = 0;
  EXPECT_THROW(gdp_m_out_of_n_bootstrap(s, mean, config, rng), ParameterError);
  config.B = 10;
  config.budget.mu = 0.0;
  EXPECT_THROW(gdp_m_out_of_n_bootstrap(s, mean, config, rng), ParameterError);
}

TEST(BootstrapCi, HandComputedOrderStatistics) {
  BootstrapDraws draws;
  draws.theta_bar = {5.0};
  draws.replicates = {{7.0, 2.0, 9.0, 4.0, 1.0, 6.0, 3.0, 10.0, 8.0, 5.0}};
  ConfidenceInterval ci = bootstrap_ci(draws, 4, 0.1);
  // B=10, alpha=0.1: ranks ceil(1)=1 and ceil(9)=9, so q_lo=1, q_hi=9.
  EXPECT_DOUBLE_EQ(ci.lower[0], 5.0 - 9.0 / 2.0);
  EXPECT_DOUBLE_EQ(ci.upper[0], 5.0 - 1.0 / 2.0);
  EXPECT_DOUBLE_EQ(ci.level, 0.8);
}

TEST(BootstrapCi, SymmetricReplicatesGiveNearSymmetricInterval) {
  BootstrapDraws draws;
  draws.theta_bar = {0.0};
  draws.replicates = {{-5, -4, -3, -2, -1, 1, 2, 3, 4, 5}};
  ConfidenceInterval ci = bootstrap_ci(draws, 1, 0.2);
  double left = -ci.lower[0];
  double right = ci.upper[0];
  EXPECT_LE(std::abs(left - right), 1.0);  // one order-statistic gap
}

TEST(BootstrapCi, NormalQuantileOracle) {
  std::mt19937_64 gen(123);
  std::normal_distribution<double> unit;
  BootstrapDraws draws;
  draws.theta_bar = {0.3};
  draws.replicates.emplace_back();
  const int kB = 300000;
  draws.replicates[0].reserve(kB);
  for (int i = 0; i < kB; ++i) draws.replicates[0].push_back(unit(gen));
  ConfidenceInterval ci = bootstrap_ci(draws, 100, 0.05);
  double half = 1.6448536269514722 / 10.0;
  EXPECT_NEAR(ci.upper[0], 0.3 + half, 0.01 * half);
  EXPECT_NEAR(ci.lower[0], 0.3 - half, 0.01 * half);
}

TEST(BootstrapCi, MonotoneAcrossAlpha) {
  Rng data_rng(31);
  Sample s = sample_truncated_normal(400, -5.0, 5.0, data_rng);
  EstimatorSpec mean = bounded_mean_estimator(-5.0, 5.0);
  Rng rng(37);
  BootstrapDraws draws = empirical_bootstrap(s, mean, 400, rng);
  for (double alpha : {0.01, 0.05, 0.1, 0.25, 0.49}) {
    ConfidenceInterval ci = bootstrap_ci(draws, 400, alpha);
    EXPECT_LE(ci.lower[0], ci.upper[0]) << "alpha=" << alpha;
  }
}

TEST(BootstrapCi, TinyBFallsBackToRange) {
  BootstrapDraws draws;
  draws.theta_bar = {0.0};
  draws.replicates = {{3.0, -2.0, 1.0, 0.0, -1.0}};
  ConfidenceInterval ci = bootstrap_ci(draws, 1, 0.1);
  EXPECT_DOUBLE_EQ(ci.lower[0], -3.0);
  EXPECT_DOUBLE_EQ(ci.upper[0], 2.0);
}

TEST(BootstrapCi, RejectsBadInputs) {
  BootstrapDraws empty;
  EXPECT_THROW(bootstrap_ci(empty, 10, 0.05), DataError);
  BootstrapDraws draws;
  draws.theta_bar = {0.0};
  draws.replicates = {{1.0, 2.0}};
  EXPECT_THROW(bootstrap_ci(draws, 10, 0.0), ParameterError);
  EXPECT_THROW(bootstrap_ci(draws, 10, 0.5), ParameterError);
  EXPECT_THROW(bootstrap_ci(draws, 0, 0.05), ParameterError);
}

TEST(ResamplingConsistency, ReplicateLawApproachesSamplingLaw) {
  // Skewed population (half-normal on [0, 5]) so the m-average visibly
  // normalizes as m grows with n; noise-free mode isolates the resampling.
  EstimatorSpec mean = bounded_mean_estimator(0.0, 5.0);
  const int kB = 20000;
  const int kRef = 30000;
  std::vector<double> ks(2);
  std::vector<int> ns{500, 5000};
  for (std::size_t which = 0; which < ns.size(); ++which) {
    auto n = static_cast<std::size_t>(ns[which]);
    Rng data_rng = Rng::derive(101, {which});
    Sample data = sample_truncated_normal(n, 0.0, 5.0, data_rng);
    BootstrapConfig config;
    config.m = choose_m(static_cast<int>(n), 500);
    config.B = kB;
    config.zero_noise = true;
    Rng boot_rng = Rng::derive(103, {which});
    BootstrapDraws draws = gdp_m_out_of_n_bootstrap(data, mean, config, boot_rng);

    // Reference draws of sqrt(n)(theta_hat - theta); the half-normal mean is
    // (phi(0) - phi(5)) / (Phi(5) - Phi(0)).
    auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
    auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    double truth = (pdf(0.0) - pdf(5.0)) / (cdf(5.0) - cdf(0.0));
    std::vector<double> ref(kRef);
    Rng ref_rng = Rng::derive(107, {which});
    double root_n = std::sqrt(static_cast<double>(n));
    for (int r = 0; r < kRef; ++r) {
      Sample fresh = sample_truncated_normal(n, 0.0, 5.0, ref_rng);
      ref[static_cast<std::size_t>(r)] = root_n * (mean.evaluate(fresh)[0] - truth);
    }
    ks[which] = ks_distance(draws.replicates[0], ref);
  }
  EXPECT_LT(ks[1], ks[0]);
}

}  // namespace
}  // namespace dpboot
