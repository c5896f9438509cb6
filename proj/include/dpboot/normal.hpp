#pragma once

namespace dpboot {

// Standard normal density.
double normal_pdf(double x);

// Standard normal CDF, absolute error below 1e-14 over the full range.
double normal_cdf(double x);

// log of normal_cdf(x), stable for large negative x where the CDF underflows.
double log_normal_cdf(double x);

// Inverse of normal_cdf on (0, 1). Rational initial guess refined by one
// Halley step against the erfc based CDF; falls back to bisection if the
// refinement leaves the bracket. Throws ParameterError outside (0, 1);
// p equal to 0 or 1 returns -inf / +inf.
double normal_quantile(double p);

}  // namespace dpboot
