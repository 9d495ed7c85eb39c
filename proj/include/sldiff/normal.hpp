#pragma once

namespace sldiff {

/// Standard normal CDF, Phi(x) = P(Z <= x), via erfc. Accurate in both tails.
double normal_cdf(double x);

/// log Phi(x), safe far into the lower tail.
double normal_log_cdf(double x);

/**
 * Standard normal quantile (inverse CDF).
 *
 * Acklam's rational minimax approximation refined by one Halley step against
 * the erfc-based CDF; absolute error is far below 1e-9 over (0, 1).
 * Throws InvalidInput for p outside (0, 1) or NaN.
 */
double normal_quantile(double p);

/// Upper alpha/2 critical value z with P(|Z| <= z) = level, level in (0,1).
double normal_two_sided_critical(double level);

}  // namespace sldiff
