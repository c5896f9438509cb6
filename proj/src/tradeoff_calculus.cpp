#include "dpboot/tradeoff_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpboot/errors.hpp"
#include "dpboot/normal.hpp"

namespace dpboot {

namespace {

constexpr double kWeightTol = 1e-9;
constexpr double kTailMass = 1e-12;
constexpr int kSweepSize = 8192;

// Inclusion counts that carry all but kTailMass of the conditional
// (at least one inclusion) distribution, as normalized weights.
void truncated_inclusion_mixture(int m, int n, double mu_star, double* p0,
                                 std::vector<double>* weights, std::vector<double>* mus) {
  std::vector<double> p = bootstrap_inclusion_probs(m, n);
  *p0 = p[0];
  double rest = 1.0 - p[0];
  weights->clear();
  mus->clear();
  double cum = 0.0;
  for (int i = 1; i <= m; ++i) {
    double w = p[static_cast<std::size_t>(i)] / rest;
    weights->push_back(w);
    mus->push_back(i * mu_star);
    cum += w;
    if (1.0 - cum < kTailMass) break;
  }
  double total = 0.0;
  for (double w : *weights) total += w;
  for (double& w : *weights) w /= total;
}

Functionals gaussian_functionals(double nu) {
  Functionals f;
  f.kl = 0.5 * nu * nu;
  f.kappa2 = nu * nu + 0.25 * nu * nu * nu * nu;
  double c = 0.5 * nu;
  double abs3 = (c * c * c + 3.0 * c) * (2.0 * normal_cdf(c) - 1.0) +
                2.0 * (c * c + 2.0) * normal_pdf(c);
  f.kappa3 = nu * nu * nu * abs3;
  return f;
}

}  // namespace

std::vector<double> bootstrap_inclusion_probs(int m, int n) {
  if (m < 1) throw ParameterError("inclusion probs: m must be >= 1");
  if (n < 1) throw ParameterError("inclusion probs: n must be >= 1");
  std::vector<double> p(static_cast<std::size_t>(m) + 1, 0.0);
  if (n == 1) {
    p[static_cast<std::size_t>(m)] = 1.0;
    return p;
  }
  // Binomial(m, 1/n) by the multiplicative recurrence, which keeps relative
  // error near machine precision for the mass-carrying head.
  p[0] = std::exp(m * std::log1p(-1.0 / n));
  for (int i = 0; i < m; ++i) {
    p[static_cast<std::size_t>(i) + 1] =
        p[static_cast<std::size_t>(i)] * static_cast<double>(m - i) /
        (static_cast<double>(i + 1) * static_cast<double>(n - 1));
  }
  return p;
}

double mu_b_star(int m, int n, int B, double mu) {
  if (m < 1 || n < 1 || B < 1) throw ParameterError("mu_b_star: m, n, B must be >= 1");
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterError("mu_b_star: mu must be positive and finite");
  }
  double hit = -std::expm1(m * std::log1p(-1.0 / n));  // 1 - (1 - 1/n)^m
  double scale = B * hit * (static_cast<double>(n + m - 1) / n) * (static_cast<double>(m) / n);
  return mu / std::sqrt(scale);
}

TradeoffCurve mix_tradeoff(const std::vector<double>& weights,
                           const std::vector<TradeoffCurve>& curves) {
  if (weights.empty() || weights.size() != curves.size()) {
    throw ParameterError("mix_tradeoff: weights and curves must match and be nonempty");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ParameterError("mix_tradeoff: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw ParameterError("mix_tradeoff: weights must sum to 1");
  }
  for (const auto& c : curves) c.validate();

  std::vector<double> w(weights);
  for (double& wi : w) wi /= total;

  // Common subgradient sweep over log slope magnitudes.
  double u_lo = std::numeric_limits<double>::infinity();
  double u_hi = -std::numeric_limits<double>::infinity();
  for (const auto& c : curves) {
    auto [steep, shallow] = c.slope_range();
    u_lo = std::min(u_lo, std::log(-shallow));
    u_hi = std::max(u_hi, std::log(-steep));
  }
  // Slopes of very sharp components overflow or underflow the exp range; a
  // sweep beyond it contributes nothing but zero or NaN slope targets.
  u_lo = std::clamp(u_lo, -700.0, 700.0);
  u_hi = std::clamp(u_hi, -700.0, 700.0);
  if (!(u_lo < u_hi)) {
    u_lo -= 1.0;
    u_hi += 1.0;
  }

  std::vector<double> xs, ys;
  xs.reserve(kSweepSize + 2);
  ys.reserve(kSweepSize + 2);
  double f_at_zero = 0.0;
  for (std::size_t i = 0; i < curves.size(); ++i) f_at_zero += w[i] * curves[i](0.0);
  xs.push_back(0.0);
  ys.push_back(f_at_zero);
  for (int k = 0; k < kSweepSize; ++k) {
    double u = u_hi + (u_lo - u_hi) * static_cast<double>(k) / (kSweepSize - 1);
    double t = -std::exp(u);
    double x = 0.0, y = 0.0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      double a = curves[i].alpha_at_slope(t);
      x += w[i] * a;
      y += w[i] * curves[i](a);
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  xs.push_back(1.0);
  ys.push_back(0.0);
  // Guard against sub-ulp ordering wiggles from the per-component solves.
  for (std::size_t i = 1; i < xs.size(); ++i) {
    xs[i] = std::max(xs[i], xs[i - 1]);
    ys[i] = std::min(ys[i], ys[i - 1]);
  }

  const auto& grid = TradeoffCurve::standard_alphas();
  std::vector<double> vals(grid.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double a = grid[i];
    while (j + 1 < xs.size() && xs[j + 1] < a) ++j;
    if (j + 1 >= xs.size()) {
      vals[i] = ys.back();
      continue;
    }
    double span = xs[j + 1] - xs[j];
    double t = span > 0.0 ? (a - xs[j]) / span : 0.0;
    vals[i] = ys[j] + t * (ys[j + 1] - ys[j]);
    vals[i] = std::min(vals[i], 1.0 - a);
    if (i > 0) vals[i] = std::min(vals[i], vals[i - 1]);
    vals[i] = std::max(vals[i], 0.0);
  }
  vals.back() = 0.0;
  // Chord interpolation between sweep points and the clamps above can leave
  // noise-level concave pockets when a component collapses inside one grid
  // cell; the mixture itself is convex, so take the envelope.
  vals = lower_convex_envelope(grid, vals);

  TradeoffCurve out = TradeoffCurve::from_grid(grid, std::move(vals));
  bool all_gaussian = true;
  TradeoffCurve::GaussianMixture mixture;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    switch (curves[i].kind()) {
      case TradeoffCurve::Kind::kGaussian:
        mixture.mus.push_back(curves[i].mu());
        break;
      case TradeoffCurve::Kind::kIdentity:
        mixture.mus.push_back(0.0);
        break;
      default:
        all_gaussian = false;
    }
    if (!all_gaussian) break;
    mixture.weights.push_back(w[i]);
  }
  if (all_gaussian) out.annotate_mixture(std::move(mixture));
  return out;
}

TradeoffCurve cp_operator(double p, const TradeoffCurve& curve) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("cp_operator: p must lie in [0, 1]");
  if (p == 0.0) return TradeoffCurve::identity();
  TradeoffCurve f = curve.to_grid();
  const auto& grid = TradeoffCurve::standard_alphas();
  std::vector<double> fp(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fp[i] = p * f.values()[i] + (1.0 - p) * (1.0 - grid[i]);
  }
  TradeoffCurve fp_curve = TradeoffCurve::from_grid(grid, fp);
  TradeoffCurve inv = fp_curve.functional_inverse();
  std::vector<double> mn(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mn[i] = std::min(fp_curve.values()[i], inv.values()[i]);
  }
  std::vector<double> env = lower_convex_envelope(grid, mn);
  for (std::size_t i = 0; i < env.size(); ++i) {
    env[i] = std::clamp(env[i], 0.0, 1.0 - grid[i]);
    if (i > 0) env[i] = std::min(env[i], env[i - 1]);
  }
  return TradeoffCurve::from_grid(grid, std::move(env));
}

TradeoffCurve bootstrap_privacy_curve(int m, int n, double mu_star) {
  if (!(mu_star > 0.0) || !std::isfinite(mu_star)) {
    throw ParameterError("bootstrap_privacy_curve: mu_star must be positive and finite");
  }
  double p0 = 0.0;
  std::vector<double> weights, mus;
  truncated_inclusion_mixture(m, n, mu_star, &p0, &weights, &mus);
  std::vector<TradeoffCurve> components;
  components.reserve(mus.size());
  for (double nu : mus) components.push_back(TradeoffCurve::gaussian(nu));
  TradeoffCurve worse = mix_tradeoff(weights, components);
  return cp_operator(1.0 - p0, worse);
}

Functionals tradeoff_functionals(const TradeoffCurve& curve) {
  if (curve.kind() == TradeoffCurve::Kind::kIdentity) return {};
  if (curve.kind() == TradeoffCurve::Kind::kGaussian) {
    return gaussian_functionals(curve.mu());
  }
  if (curve.mixture().has_value()) {
    const auto& mixture = *curve.mixture();
    Functionals out;
    for (std::size_t i = 0; i < mixture.weights.size(); ++i) {
      Functionals g = gaussian_functionals(mixture.mus[i]);
      out.kl += mixture.weights[i] * g.kl;
      out.kappa2 += mixture.weights[i] * g.kappa2;
      out.kappa3 += mixture.weights[i] * g.kappa3;
    }
    return out;
  }

  const auto& xs = curve.alphas();
  const auto& f = curve.values();
  std::size_t n = xs.size();
  double flat_measure = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double slope = (f[j + 1] - f[j]) / (xs[j + 1] - xs[j]);
    if (std::abs(slope) < 1e-13) flat_measure += xs[j + 1] - xs[j];
  }
  if (flat_measure > 0.9) {
    throw DataError("tradeoff_functionals: curve is flat over (0, 1), functionals diverge");
  }

  // Central-difference derivative at interior nodes, trapezoid over the
  // interior, one-sided slopes for the two boundary cells.
  Functionals out;
  auto accumulate = [&out](double g, double measure) {
    out.kl += -g * measure;
    out.kappa2 += g * g * measure;
    out.kappa3 += std::abs(g * g * g) * measure;
  };
  std::vector<double> g(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    double d = (f[j + 1] - f[j - 1]) / (xs[j + 1] - xs[j - 1]);
    g[j] = std::log(std::max(std::abs(d), 1e-300));
  }
  g[0] = std::log(std::max(std::abs((f[1] - f[0]) / (xs[1] - xs[0])), 1e-300));
  g[n - 1] = std::log(std::max(std::abs((f[n - 1] - f[n - 2]) / (xs[n - 1] - xs[n - 2])), 1e-300));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double h = xs[j + 1] - xs[j];
    accumulate(0.5 * (g[j] + g[j + 1]), h);
  }
  return out;
}

std::vector<double> asymptotic_privacy_check(int m, int n, double mu,
                                             const std::vector<int>& b_grid) {
  if (b_grid.empty()) throw ParameterError("asymptotic_privacy_check: empty B grid");
  std::vector<double> out;
  out.reserve(b_grid.size());
  for (int B : b_grid) {
    double mu_star = mu_b_star(m, n, B, mu);
    double p0 = 0.0;
    std::vector<double> weights, mus;
    truncated_inclusion_mixture(m, n, mu_star, &p0, &weights, &mus);
    std::vector<TradeoffCurve> components;
    components.reserve(mus.size());
    for (double nu : mus) components.push_back(TradeoffCurve::gaussian(nu));
    Functionals fn = tradeoff_functionals(mix_tradeoff(weights, components));
    double centered = fn.kappa2 - fn.kl * fn.kl;
    double kl_limit = (1.0 - p0) * (1.0 - p0) * fn.kl;
    double s2 = B * (1.0 - p0) * (1.0 - p0) * centered;
    out.push_back(2.0 * B * kl_limit / std::sqrt(s2));
  }
  return out;
}

}  // namespace dpboot
