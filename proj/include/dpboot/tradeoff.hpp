#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace dpboot {

// A trade-off function on [0, 1]: convex, non-increasing, dominated by the
// identity curve 1 - alpha. Gaussian and identity curves evaluate in closed
// form; everything else lives on a dense grid with linear interpolation.
class TradeoffCurve {
 public:
  enum class Kind { kGaussian, kIdentity, kGrid };

  // Grid curves produced by mixing Gaussian components keep the component
  // description around so functionals can be evaluated exactly.
  struct GaussianMixture {
    std::vector<double> weights;
    std::vector<double> mus;
  };

  static constexpr int kStandardGridSize = 2048;
  static const std::vector<double>& standard_alphas();

  static TradeoffCurve gaussian(double mu);
  static TradeoffCurve identity();
  static TradeoffCurve from_grid(std::vector<double> alphas, std::vector<double> values);

  Kind kind() const { return kind_; }
  double mu() const;

  double operator()(double alpha) const;

  // Smallest abscissa whose subgradient contains `slope` (clamped to the
  // endpoints when the slope lies outside the curve's range). slope < 0.
  double alpha_at_slope(double slope) const;

  // Steepest and shallowest finite slopes the curve attains, as a pair
  // (steep, shallow). Used to size slope sweeps.
  std::pair<double, double> slope_range() const;

  // Resamples onto the standard abscissae. Gaussian and identity curves get
  // exact ordinates; grid curves are returned as-is when already standard.
  TradeoffCurve to_grid() const;

  // Left-continuous functional inverse inf{x : f(x) <= a} on the standard
  // grid; flat segments resolve to the smallest abscissa.
  TradeoffCurve functional_inverse() const;

  // Max deviation between the curve and its inverse on the standard grid.
  double asymmetry() const;

  const std::vector<double>& alphas() const;
  const std::vector<double>& values() const;

  const std::optional<GaussianMixture>& mixture() const { return mixture_; }
  void annotate_mixture(GaussianMixture mixture);

  // Enforces the representation invariants; throws DataError on violation.
  void validate() const;

 private:
  TradeoffCurve() = default;

  Kind kind_ = Kind::kIdentity;
  double mu_ = 0.0;
  std::vector<double> alphas_;
  std::vector<double> values_;
  std::optional<GaussianMixture> mixture_;
};

// Greatest convex minorant of the points (alphas[i], values[i]), evaluated
// back at the same abscissae. alphas must be strictly increasing.
std::vector<double> lower_convex_envelope(const std::vector<double>& alphas,
                                          const std::vector<double>& values);

}  // namespace dpboot
