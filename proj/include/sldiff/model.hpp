#pragma once

/**
 * Sine-like (SL) lognormal diffusion.
 *
 * The process solves
 *
 *   dX(t) = A(t) X(t) dt + sigma X(t) dW(t),   t in [t1, T], t1 > 0,
 *
 * where the relative drift A(t) = 2/t - lambda + (lambda*pi/(2 t^2)) e^{-lambda/t}
 * cot(u(t)) is the log-derivative of the trend, with phase
 *
 *   u(t) = (pi/2) e^{-lambda/t}.
 *
 * Log-transforming gives an explicit solution, so transitions are exactly
 * lognormal: ln X(t) | X(s) = x_s  ~  N(mu(s,t,x_s), sigma^2 (t-s)) with
 *
 *   mu(s,t,x_s) = ln x_s + 2 ln(t/s) - lambda (t-s)
 *               + ln sin(u(t)) - ln sin(u(s)) - (sigma^2/2)(t-s).
 *
 * Everything here requires the phase to stay inside (0, pi) over the working
 * time window so that every log-sin term is finite (the "domain guard");
 * violations raise DomainError.
 */

#include <Eigen/Core>

#include "sldiff/errors.hpp"

namespace sldiff {

/// SL parameter pair. lambda is a nonzero real, sigma > 0.
struct SlParams {
    double lambda;
    double sigma;

    SlParams(double lambda_, double sigma_);
    double sigma2() const { return sigma * sigma; }
};

/// Working time window [t1, t_end], 0 < t1 < t_end.
struct TimeWindow {
    double t1;
    double t_end;

    TimeWindow(double t1_, double t_end_);
};

/// Phase u = (pi/2) e^{-lambda/t}. Pure evaluation; rejects NaN and t <= 0.
double phase(double lambda, double t);

/// True when u(t) lies in (0, pi) and sin(u(t)) is clear of the pole tolerance.
bool phase_in_domain(double lambda, double t);

/// True when the guard holds at every t in the window (endpoint check suffices:
/// u is monotone in t and sin is concave on (0, pi)).
bool domain_guard_holds(double lambda, const TimeWindow& window);

/// Drift a(t, x) = A(t) x, the log-derivative form of the trend equation, so
/// that the mean function m satisfies m'(t) = drift_coefficient(p, t, m(t)).
double drift_coefficient(const SlParams& params, double t, double x);

/// Lognormal location mu(s,t,x_s) of ln X(t) given X(s) = x_s, for s <= t.
double log_mean_increment(const SlParams& params, double s, double t, double x_s);

/// ln f(y, t | x_s, s) of the lognormal transition density, s < t, y > 0.
double transition_logpdf(const SlParams& params, double s, double t, double x_s, double y);

/// Conditional mean E[X(t) | X(s) = x_s] = exp(mu + sigma^2 (t-s)/2), the trend
/// function anchored at (s, x_s).
double conditional_mean(const SlParams& params, double s, double t, double x_s);

/// Mean function E[X(t)] under P(X(t1) = x1) = 1; the unconditional trend.
double mean_function(const SlParams& params, double t1, double x1, double t);

/// Var[X(t)] = mean_function^2 * (e^{sigma^2 (t-t1)} - 1).
double variance_function(const SlParams& params, double t1, double x1, double t);

struct Bounds {
    double lower;
    double upper;
};

/// Two-sided lognormal confidence bounds for X(t) given X(t1) = x1:
/// exp(mu(t1,t,x1) -+ z_{alpha/2} sigma sqrt(t-t1)) with alpha = 1 - level.
Bounds confidence_bounds(const SlParams& params, double t1, double x1, double t, double level);

/// Mean function evaluated over a grid of times.
Eigen::ArrayXd mean_curve(const SlParams& params, double t1, double x1,
                          const Eigen::ArrayXd& times);

/// Confidence band rows over a grid of times.
struct ConfidenceBand {
    double level;
    Eigen::ArrayXd times;
    Eigen::ArrayXd lower;
    Eigen::ArrayXd upper;
};

ConfidenceBand confidence_band(const SlParams& params, double t1, double x1,
                               const Eigen::ArrayXd& times, double level);

namespace detail {
/// |sin(u)| at or below this is treated as a cotangent / log-sin pole.
inline constexpr double kSinPoleTol = 1e-12;
/// ln sin(u(t)) with pole and domain checks.
double log_sin_phase(double lambda, double t);
}  // namespace detail

}  // namespace sldiff
