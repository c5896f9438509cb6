#pragma once

#include <vector>

#include "dpboot/tradeoff.hpp"

namespace dpboot {

// Probability that a fixed record appears exactly i times in m uniform draws
// with replacement from n records: Binomial(m, 1/n). Index i runs 0..m.
std::vector<double> bootstrap_inclusion_probs(int m, int n);

// Per-replicate budget mu*_B of the m-out-of-n scheme at total budget mu:
// mu / sqrt(B (1-(1-1/n)^m) ((n+m-1)/n) (m/n)).
double mu_b_star(int m, int n, int B, double mu);

// Mixture of trade-off curves along common subgradients:
// mix(p, f)(sum_i p_i a_i(t)) = sum_i p_i f_i(a_i(t)) where every f_i attains
// slope t at a_i(t). Weights must be positive and sum to 1. The result is a
// grid curve; when every component is Gaussian it carries a mixture
// annotation for exact functionals.
TradeoffCurve mix_tradeoff(const std::vector<double>& weights,
                           const std::vector<TradeoffCurve>& curves);

// C_p(f) = greatest convex minorant of min{f_p, f_p^-1} with
// f_p = p f + (1-p)(1-x). p in [0, 1]; f should be symmetric and convex.
TradeoffCurve cp_operator(double p, const TradeoffCurve& curve);

// Per-iteration privacy curve of the noisy m-out-of-n bootstrap:
// C_{1-p0}( mix( p_i/(1-p0), G_{i mu_star} ) ), components beyond cumulative
// inclusion mass 1 - 1e-12 are truncated.
TradeoffCurve bootstrap_privacy_curve(int m, int n, double mu_star);

struct Functionals {
  double kl = 0.0;      // -int_0^1 log|f'|
  double kappa2 = 0.0;  // int_0^1 log^2|f'|
  double kappa3 = 0.0;  // int_0^1 |log|f'||^3
};

// Exact for gaussian, identity and mixture-annotated curves; numeric
// integration with central-difference derivatives otherwise. Throws
// DataError for curves that are flat over essentially all of (0, 1).
Functionals tradeoff_functionals(const TradeoffCurve& curve);

// Effective composed budget mu_eff(B) = 2(B kl)/sqrt(B kappa2_centered) of
// B bootstrap iterations, using the limit scalings kl -> (1-p0)^2 kl(f_>)
// and the centered second moment. Approaches mu as B grows.
std::vector<double> asymptotic_privacy_check(int m, int n, double mu,
                                             const std::vector<int>& b_grid);

}  // namespace dpboot
