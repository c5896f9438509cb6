#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dpboot/rng.hpp"

namespace dpboot {

// Dataset of n records with `dim` features each, stored row major. Labels
// (if present) are in {-1, +1} and parallel to the records.
struct Sample {
  std::size_t dim = 1;
  std::vector<double> features;  // n * dim
  std::vector<int> labels;       // empty or size n

  std::size_t size() const { return dim == 0 ? 0 : features.size() / dim; }
  const double* record(std::size_t i) const { return features.data() + i * dim; }
  bool has_labels() const { return !labels.empty(); }

  // Rows at the given indices, labels carried along when present.
  Sample subset(const std::vector<std::size_t>& indices) const;

  void validate() const;
};

// A point estimator together with the sensitivity law Delta(k) used to
// calibrate noise on a sample of size k.
struct EstimatorSpec {
  std::size_t dimension = 1;
  double sensitivity_constant = 0.0;  // Delta(k) = sensitivity_constant / k
  std::function<std::vector<double>(const Sample&)> evaluate;

  double sensitivity(std::size_t k) const { return sensitivity_constant / static_cast<double>(k); }
};

// Coordinate-wise mean; records are assumed to lie in [lower, upper], so the
// sensitivity constant is upper - lower.
EstimatorSpec bounded_mean_estimator(double lower, double upper);

// Minimizer of (1/n) sum log(1 + exp(-y theta.x)) + |theta|^2 over records
// with ||x|| <= 1, for which the sensitivity constant is 1.
EstimatorSpec regularized_logistic_estimator(std::size_t dimension);

struct FitOptions {
  double tolerance = 1e-8;    // on the gradient norm
  std::size_t max_iters = 100000;
};

// Gradient of the regularized logistic objective at theta.
std::vector<double> regularized_logistic_gradient(const Sample& data,
                                                  const std::vector<double>& theta);

double regularized_logistic_objective(const Sample& data, const std::vector<double>& theta);

// Gradient descent from the origin with backtracking line search.
// Deterministic for fixed data. Throws ConvergenceError past max_iters.
std::vector<double> fit_regularized_logistic(const Sample& data,
                                             const FitOptions& options = {});

// n draws of a standard normal conditioned on [lower, upper], by rejection.
Sample sample_truncated_normal(std::size_t n, double lower, double upper, Rng& rng);

// Synthetic 17 dimensional logistic data: intercept plus 8 standard normals
// truncated to [0, 1] plus 8 uniforms on [0, 1], all scaled by 1/sqrt(17);
// labels drawn from the logistic law at the generating coefficients.
Sample synthesize_logistic_17d(std::size_t n, Rng& rng);

// Generating coefficients of synthesize_logistic_17d.
std::vector<double> logistic_17d_coefficients();

}  // namespace dpboot
