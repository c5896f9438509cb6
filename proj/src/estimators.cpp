#include "dpboot/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpboot/errors.hpp"

namespace dpboot {

namespace {

// log(1 + exp(-t)) without overflow.
double log1p_exp_neg(double t) {
  if (t > 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

double sq_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

Sample Sample::subset(const std::vector<std::size_t>& indices) const {
  Sample out;
  out.dim = dim;
  out.features.resize(indices.size() * dim);
  if (has_labels()) out.labels.resize(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const double* src = record(indices[r]);
    std::copy(src, src + dim, out.features.begin() + static_cast<std::ptrdiff_t>(r * dim));
    if (has_labels()) out.labels[r] = labels[indices[r]];
  }
  return out;
}

void Sample::validate() const {
  if (dim == 0) throw DataError("sample: dimension must be positive");
  if (features.size() % dim != 0) {
    throw DataError("sample: feature buffer is not a multiple of the dimension");
  }
  if (!labels.empty()) {
    if (labels.size() != size()) throw DataError("sample: label count mismatch");
    for (int y : labels) {
      if (y != 1 && y != -1) throw DataError("sample: labels must be +1 or -1");
    }
  }
}

EstimatorSpec bounded_mean_estimator(double lower, double upper) {
  if (!(lower < upper)) throw ParameterError("bounded_mean_estimator: lower must be < upper");
  EstimatorSpec spec;
  spec.dimension = 1;
  spec.sensitivity_constant = upper - lower;
  spec.evaluate = [](const Sample& data) {
    data.validate();
    if (data.size() == 0) throw DataError("bounded mean: empty sample");
    std::size_t d = data.dim;
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double* x = data.record(i);
      for (std::size_t c = 0; c < d; ++c) mean[c] += x[c];
    }
    for (double& v : mean) v /= static_cast<double>(data.size());
    return mean;
  };
  return spec;
}

EstimatorSpec regularized_logistic_estimator(std::size_t dimension) {
  if (dimension == 0) throw ParameterError("logistic estimator: dimension must be positive");
  EstimatorSpec spec;
  spec.dimension = dimension;
  spec.sensitivity_constant = 1.0;
  spec.evaluate = [](const Sample& data) { return fit_regularized_logistic(data); };
  return spec;
}

double regularized_logistic_objective(const Sample& data, const std::vector<double>& theta) {
  data.validate();
  if (!data.has_labels()) throw DataError("logistic objective: sample has no labels");
  if (theta.size() != data.dim) throw DataError("logistic objective: theta dimension mismatch");
  std::size_t n = data.size();
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = data.record(i);
    double dot = 0.0;
    for (std::size_t c = 0; c < data.dim; ++c) dot += theta[c] * x[c];
    loss += log1p_exp_neg(data.labels[i] * dot);
  }
  return loss / static_cast<double>(n) + sq_norm(theta);
}

std::vector<double> regularized_logistic_gradient(const Sample& data,
                                                  const std::vector<double>& theta) {
  data.validate();
  if (!data.has_labels()) throw DataError("logistic gradient: sample has no labels");
  if (theta.size() != data.dim) throw DataError("logistic gradient: theta dimension mismatch");
  std::size_t n = data.size();
  std::vector<double> grad(data.dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = data.record(i);
    double y = data.labels[i];
    double dot = 0.0;
    for (std::size_t c = 0; c < data.dim; ++c) dot += theta[c] * x[c];
    // d/dtheta log(1+exp(-y theta.x)) = -y x sigmoid(-y theta.x)
    double s = 1.0 / (1.0 + std::exp(y * dot));
    double coef = -y * s;
    for (std::size_t c = 0; c < data.dim; ++c) grad[c] += coef * x[c];
  }
  double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < data.dim; ++c) grad[c] = grad[c] * inv_n + 2.0 * theta[c];
  return grad;
}

std::vector<double> fit_regularized_logistic(const Sample& data, const FitOptions& options) {
  data.validate();
  if (data.size() == 0) throw DataError("logistic fit: empty sample");
  if (!data.has_labels()) throw DataError("logistic fit: sample has no labels");

  std::vector<double> theta(data.dim, 0.0);
  double obj = regularized_logistic_objective(data, theta);
  // The ridge term makes the objective 2-strongly convex and, with unit-norm
  // features, at most 2.25-smooth, so a fixed base step close to 1/L with
  // Armijo backtracking converges in a few dozen iterations.
  const double base_step = 0.45;
  const double armijo = 1e-4;
  // Near the minimum the Armijo decrease is smaller than one rounding unit of
  // the objective, so the comparison carries no signal and rejects contracting
  // steps on rounding jitter.  In that regime accept a step that keeps the
  // objective within rounding distance; the gradient test still decides
  // convergence.
  const double ulp_slack = 4.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    std::vector<double> grad = regularized_logistic_gradient(data, theta);
    double gnorm2 = sq_norm(grad);
    if (std::sqrt(gnorm2) <= options.tolerance) return theta;
    double step = base_step;
    std::vector<double> trial(data.dim);
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t c = 0; c < data.dim; ++c) trial[c] = theta[c] - step * grad[c];
      double trial_obj = regularized_logistic_objective(data, trial);
      double decrease = armijo * step * gnorm2;
      double resolution = ulp_slack * std::max(1.0, std::abs(obj));
      if (trial_obj <= obj - decrease ||
          (decrease <= resolution && trial_obj <= obj + resolution)) {
        theta.swap(trial);
        obj = trial_obj;
        break;
      }
      step *= 0.5;
    }
  }
  std::vector<double> grad = regularized_logistic_gradient(data, theta);
  throw ConvergenceError("logistic fit: gradient norm " + std::to_string(std::sqrt(sq_norm(grad))) +
                         " after " + std::to_string(options.max_iters) + " iterations");
}

Sample sample_truncated_normal(std::size_t n, double lower, double upper, Rng& rng) {
  if (!(lower < upper)) throw ParameterError("truncated normal: lower must be < upper");
  Sample out;
  out.dim = 1;
  out.features.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z;
    do {
      z = rng.normal();
    } while (z < lower || z > upper);
    out.features.push_back(z);
  }
  return out;
}

std::vector<double> logistic_17d_coefficients() {
  std::vector<double> theta(17, 0.0);
  for (int c = 1; c <= 8; ++c) theta[static_cast<std::size_t>(c)] = 5.0;
  for (int c = 9; c <= 16; ++c) theta[static_cast<std::size_t>(c)] = -5.0;
  return theta;
}

Sample synthesize_logistic_17d(std::size_t n, Rng& rng) {
  const std::vector<double> theta = logistic_17d_coefficients();
  const double scale = 1.0 / std::sqrt(17.0);
  Sample out;
  out.dim = 17;
  out.features.resize(n * 17);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double* x = out.features.data() + i * 17;
    x[0] = scale;
    for (int c = 1; c <= 8; ++c) {
      double z;
      do {
        z = rng.normal();
      } while (z < 0.0 || z > 1.0);
      x[c] = z * scale;
    }
    for (int c = 9; c <= 16; ++c) x[c] = rng.uniform01() * scale;
    double dot = 0.0;
    for (std::size_t c = 0; c < 17; ++c) dot += theta[c] * x[c];
    double p1 = 1.0 / (1.0 + std::exp(-dot));
    out.labels[i] = rng.uniform01() <= p1 ? 1 : -1;
  }
  return out;
}

}  // namespace dpboot
