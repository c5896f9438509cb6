#include "dpboot/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpboot/errors.hpp"
#include "dpboot/normal.hpp"

namespace dpboot {

namespace {

constexpr double kMonotoneTol = 1e-9;

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t j = static_cast<std::size_t>(it - xs.begin());
  double x0 = xs[j - 1], x1 = xs[j];
  double t = (x - x0) / (x1 - x0);
  return ys[j - 1] + t * (ys[j] - ys[j - 1]);
}

}  // namespace

const std::vector<double>& TradeoffCurve::standard_alphas() {
  static const std::vector<double> grid = [] {
    std::vector<double> g(kStandardGridSize);
    for (int i = 0; i < kStandardGridSize; ++i) {
      g[static_cast<std::size_t>(i)] = static_cast<double>(i) / (kStandardGridSize - 1);
    }
    g.front() = 0.0;
    g.back() = 1.0;
    return g;
  }();
  return grid;
}

TradeoffCurve TradeoffCurve::gaussian(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ParameterError("gaussian tradeoff: mu must be finite and >= 0");
  }
  if (mu == 0.0) return identity();
  TradeoffCurve c;
  c.kind_ = Kind::kGaussian;
  c.mu_ = mu;
  return c;
}

TradeoffCurve TradeoffCurve::identity() {
  TradeoffCurve c;
  c.kind_ = Kind::kIdentity;
  return c;
}

TradeoffCurve TradeoffCurve::from_grid(std::vector<double> alphas, std::vector<double> values) {
  TradeoffCurve c;
  c.kind_ = Kind::kGrid;
  c.alphas_ = std::move(alphas);
  c.values_ = std::move(values);
  c.validate();
  return c;
}

double TradeoffCurve::mu() const {
  if (kind_ != Kind::kGaussian) throw ParameterError("mu() requires a gaussian curve");
  return mu_;
}

double TradeoffCurve::operator()(double alpha) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("tradeoff curve: alpha must lie in [0, 1]");
  }
  switch (kind_) {
    case Kind::kIdentity:
      return 1.0 - alpha;
    case Kind::kGaussian: {
      if (alpha == 0.0) return 1.0;
      if (alpha == 1.0) return 0.0;
      return normal_cdf(normal_quantile(1.0 - alpha) - mu_);
    }
    case Kind::kGrid:
      return interpolate(alphas_, values_, alpha);
  }
  return 0.0;
}

double TradeoffCurve::alpha_at_slope(double slope) const {
  if (!(slope < 0.0)) throw ParameterError("alpha_at_slope: slope must be negative");
  switch (kind_) {
    case Kind::kIdentity:
      if (slope < -1.0) return 0.0;
      if (slope > -1.0) return 1.0;
      return 0.5;
    case Kind::kGaussian: {
      // |G'(a)| = exp(mu z - mu^2/2) with z = Phi^-1(1-a).
      double z = (std::log(-slope) + 0.5 * mu_ * mu_) / mu_;
      return 1.0 - normal_cdf(z);
    }
    case Kind::kGrid: {
      std::size_t n = alphas_.size();
      // Segment slopes are non-decreasing by convexity; find the first node
      // whose right-hand slope is >= slope.
      std::size_t lo = 0, hi = n - 1;
      auto seg_slope = [&](std::size_t j) {
        return (values_[j + 1] - values_[j]) / (alphas_[j + 1] - alphas_[j]);
      };
      if (slope <= seg_slope(0)) return alphas_.front();
      if (slope >= seg_slope(n - 2)) return alphas_.back();
      while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (seg_slope(mid) < slope) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return alphas_[hi];
    }
  }
  return 0.0;
}

std::pair<double, double> TradeoffCurve::slope_range() const {
  switch (kind_) {
    case Kind::kIdentity:
      return {-1.0, -1.0};
    case Kind::kGaussian: {
      // Slopes at the resolution limit of the standard grid.
      double eps = 0.5 / kStandardGridSize;
      double z_hi = normal_quantile(1.0 - eps);
      double steep = -std::exp(mu_ * z_hi - 0.5 * mu_ * mu_);
      double shallow = -std::exp(mu_ * -z_hi - 0.5 * mu_ * mu_);
      return {steep, shallow};
    }
    case Kind::kGrid: {
      double steep = 0.0, shallow = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j + 1 < alphas_.size(); ++j) {
        double s = (values_[j + 1] - values_[j]) / (alphas_[j + 1] - alphas_[j]);
        if (s < 0.0) {
          steep = std::min(steep, s);
          shallow = std::max(shallow, s);
        }
      }
      if (!std::isfinite(shallow)) shallow = -1e-12;
      if (steep == 0.0) steep = -1.0;
      return {steep, shallow};
    }
  }
  return {-1.0, -1.0};
}

TradeoffCurve TradeoffCurve::to_grid() const {
  if (kind_ == Kind::kGrid && alphas_ == standard_alphas()) return *this;
  const auto& grid = standard_alphas();
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = (*this)(grid[i]);
  TradeoffCurve c = from_grid(grid, std::move(vals));
  c.mixture_ = mixture_;
  if (kind_ == Kind::kGaussian) c.mixture_ = GaussianMixture{{1.0}, {mu_}};
  return c;
}

TradeoffCurve TradeoffCurve::functional_inverse() const {
  TradeoffCurve g = to_grid();
  const auto& grid = standard_alphas();
  const auto& f = g.values_;
  std::size_t n = f.size();
  std::vector<double> inv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double a = grid[i];
    if (a >= f[0]) {
      inv[i] = 0.0;
      continue;
    }
    if (a < f[n - 1]) {
      inv[i] = 1.0;
      continue;
    }
    // Leftmost segment with f[j-1] > a >= f[j].
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (f[mid] > a) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    double f0 = f[lo], f1 = f[hi];
    double t = f0 > f1 ? (f0 - a) / (f0 - f1) : 1.0;
    inv[i] = grid[lo] + t * (grid[hi] - grid[lo]);
  }
  // Left-continuity on flats: walk back duplicates of the same ordinate.
  return from_grid(grid, std::move(inv));
}

double TradeoffCurve::asymmetry() const {
  TradeoffCurve g = to_grid();
  TradeoffCurve inv = functional_inverse();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.values_.size(); ++i) {
    worst = std::max(worst, std::abs(g.values_[i] - inv.values_[i]));
  }
  return worst;
}

const std::vector<double>& TradeoffCurve::alphas() const {
  if (kind_ != Kind::kGrid) throw ParameterError("alphas() requires a grid curve");
  return alphas_;
}

const std::vector<double>& TradeoffCurve::values() const {
  if (kind_ != Kind::kGrid) throw ParameterError("values() requires a grid curve");
  return values_;
}

void TradeoffCurve::annotate_mixture(GaussianMixture mixture) {
  if (mixture.weights.size() != mixture.mus.size() || mixture.weights.empty()) {
    throw ParameterError("mixture annotation: weights and mus must match and be nonempty");
  }
  mixture_ = std::move(mixture);
}

void TradeoffCurve::validate() const {
  if (kind_ != Kind::kGrid) return;
  if (alphas_.size() != values_.size()) {
    throw DataError("tradeoff grid: abscissae and ordinates differ in length");
  }
  if (alphas_.size() < 1001) {
    throw DataError("tradeoff grid: needs at least 1001 points");
  }
  if (alphas_.front() != 0.0 || alphas_.back() != 1.0) {
    throw DataError("tradeoff grid: abscissae must span [0, 1] exactly");
  }
  for (std::size_t i = 0; i + 1 < alphas_.size(); ++i) {
    if (!(alphas_[i] < alphas_[i + 1])) {
      throw DataError("tradeoff grid: abscissae must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double v = values_[i];
    if (!(v >= -kMonotoneTol && v <= 1.0 + kMonotoneTol)) {
      throw DataError("tradeoff grid: ordinates must lie in [0, 1]");
    }
    if (v > 1.0 - alphas_[i] + kMonotoneTol) {
      throw DataError("tradeoff grid: curve exceeds the identity curve");
    }
    if (i > 0 && values_[i] > values_[i - 1] + kMonotoneTol) {
      throw DataError("tradeoff grid: ordinates must be non-increasing");
    }
  }
  for (std::size_t i = 1; i + 1 < alphas_.size(); ++i) {
    double h0 = alphas_[i] - alphas_[i - 1];
    double h1 = alphas_[i + 1] - alphas_[i];
    double left = (values_[i] - values_[i - 1]) / h0;
    double right = (values_[i + 1] - values_[i]) / h1;
    if (right < left - kMonotoneTol / std::min(h0, h1)) {
      throw DataError("tradeoff grid: curve is not convex");
    }
  }
}

std::vector<double> lower_convex_envelope(const std::vector<double>& alphas,
                                          const std::vector<double>& values) {
  std::size_t n = alphas.size();
  if (values.size() != n || n < 2) {
    throw ParameterError("lower_convex_envelope: need matching vectors of length >= 2");
  }
  // Monotone chain over points already sorted by abscissa.
  std::vector<std::size_t> hull;
  hull.reserve(n);
  auto cross = [&](std::size_t a, std::size_t b, std::size_t c) {
    return (alphas[b] - alphas[a]) * (values[c] - values[a]) -
           (alphas[c] - alphas[a]) * (values[b] - values[a]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<double> out(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (seg + 1 < hull.size() && alphas[hull[seg + 1]] <= alphas[i]) ++seg;
    if (seg + 1 >= hull.size()) {
      out[i] = values[hull.back()];
      continue;
    }
    std::size_t a = hull[seg], b = hull[seg + 1];
    double t = (alphas[i] - alphas[a]) / (alphas[b] - alphas[a]);
    out[i] = values[a] + t * (values[b] - values[a]);
  }
  return out;
}

}  // namespace dpboot
