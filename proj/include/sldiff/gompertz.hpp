#pragma once

/**
 * Homogeneous Gompertz lognormal diffusion, the comparison baseline:
 *
 *   dX = (lambda - beta ln X) X dt + sigma X dW,   beta > 0, sigma > 0.
 *
 * Y = ln X is an Ornstein-Uhlenbeck process, so transitions are exactly
 * lognormal: Y(t) | Y(s) ~ N(m, v) with, for D = t - s,
 *
 *   m = e^{-beta D} ln x_s + ((lambda - sigma^2/2)/beta)(1 - e^{-beta D}),
 *   v = sigma^2 (1 - e^{-2 beta D}) / (2 beta).
 *
 * For uniform spacing the log-sampled chain is a Gaussian AR(1), so the
 * conditional MLE is closed-form (regress ln x_{j+1} on ln x_j); a coordinate
 * ascent polishes or replaces it when the regression leaves the feasible set.
 */

#include <array>
#include <optional>

#include "sldiff/series.hpp"

namespace sldiff {

struct GompertzParams {
    double lambda;  // intrinsic growth, per unit time
    double beta;    // mean-reversion rate, > 0
    double sigma;   // volatility, > 0

    GompertzParams(double lambda_, double beta_, double sigma_);
    double sigma2() const { return sigma * sigma; }
};

/// ln f(y, t | x_s, s) of the lognormal Gompertz transition, s < t.
double gompertz_transition_logpdf(const GompertzParams& params, double s, double t, double x_s,
                                  double y);

/// Sum of transition log-densities over the sample.
double gompertz_log_likelihood(const GompertzParams& params, const TimeSeries& series);

struct GompertzFitReport {
    GompertzParams params;
    double log_likelihood;
    double aic;
    int n_transitions;
    int rounds;              // coordinate-ascent rounds after the regression start
    bool converged;
    bool boundary_warning;   // beta ended on a search bound
    std::optional<std::array<double, 3>> std_errors;  // (se_lambda, se_beta, se_sigma)
};

struct GompertzFitOptions {
    double lambda_lo = -10.0, lambda_hi = 10.0;
    double beta_lo = 1e-8, beta_hi = 10.0;
    double sigma2_lo = 1e-12, sigma2_hi = 10.0;
    double tol = 1e-10;   // per-round improvement threshold
    int max_rounds = 500;
    bool with_std_errors = true;
};

/// Maximum-likelihood fit. Throws NoConvergenceError if coordinate ascent
/// cannot push the per-round improvement below tol within max_rounds.
GompertzFitReport fit_gompertz(const TimeSeries& series, const GompertzFitOptions& options = {});

}  // namespace sldiff
