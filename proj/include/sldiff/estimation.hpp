#pragma once

/**
 * Maximum-likelihood fitting of the SL process from a sampled trajectory.
 *
 * The per-transition quantity
 *
 *   H_j(lambda) = ln(x_{j+1}/x_j) - 2 ln(t_{j+1}/t_j) + lambda h_j
 *               - [ln sin(u(t_{j+1})) - ln sin(u(t_j))],   h_j = t_{j+1} - t_j,
 *
 * satisfies ln x_{j+1} - mu_j = H_j + (sigma^2/2) h_j, so the log-likelihood
 * is a sum of lognormal transition terms in H. For uniform spacing h the
 * variance profile is closed-form,
 *
 *   sigma2_hat(lambda) = (2/h) [ sqrt(1 + mean_j H_j^2) - 1 ],
 *
 * which reduces fitting to a one-dimensional root solve of the lambda score.
 * Non-uniform spacing falls back to nested one-dimensional maximization.
 */

#include <array>
#include <optional>
#include <vector>

#include "sldiff/model.hpp"
#include "sldiff/series.hpp"

namespace sldiff {

struct TransitionTerm {
    Eigen::Index j;     // transition index, 0-based: (t_j, x_j) -> (t_{j+1}, x_{j+1})
    double h;           // t_{j+1} - t_j
    double h_lambda;    // H_j(lambda)
    double dh_dlambda;  // dH_j/dlambda
};

/// All transition terms at a given lambda. Throws DomainError on guard violation.
std::vector<TransitionTerm> h_terms(double lambda, const TimeSeries& series);

/// Exact log-likelihood: the sum of lognormal transition log-densities,
/// computed per transition with individual spacings h_j.
double log_likelihood(const SlParams& params, const TimeSeries& series);

/// Closed-form variance profile sigma2_hat(lambda). Uniform spacing only.
double sigma2_profile(double lambda, const TimeSeries& series);

/// Score for lambda with the variance profiled out:
/// sum_j (H_j + sigma2_hat(lambda) h / 2) dH_j/dlambda. Its root is the MLE.
/// (The total profile-likelihood derivative is -1/(sigma2_hat h) times this.)
double lambda_score(double lambda, const TimeSeries& series);

/// ell(lambda, sigma2_hat(lambda)); uniform spacing only.
double profile_log_likelihood(double lambda, const TimeSeries& series);

/// Akaike information criterion, 2k - 2 ell.
double aic(double log_likelihood, int k);

enum class SpacingMode { uniform, general };

struct SolverInfo {
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
    double score_residual = 0.0;  // |score| / (sum_j |H_j dH_j| + eps)
    bool converged = false;
};

struct FitReport {
    SlParams params;
    double log_likelihood;
    double aic;
    int n_transitions;
    SolverInfo solver;
    SpacingMode spacing;
    double t1;  // anchor time of the fitted window
    double x1;  // anchor value of the fitted window
    /// Numerical-Hessian standard errors (se_lambda, se_sigma); an extension
    /// beyond the estimating equations, absent when the Hessian is not
    /// negative definite.
    std::optional<std::array<double, 2>> std_errors;
};

struct FitOptions {
    double bracket_lo = -5.0;
    double bracket_hi = 5.0;
    double tol = 1e-12;      // width tolerance on the lambda bracket
    int grid_points = 200;   // coarse scan for sign changes / global check
    bool with_std_errors = true;
    bool force_general = false;  // exercise the non-uniform path on uniform data
};

/**
 * Fit (lambda, sigma) by maximum likelihood.
 *
 * Uniform spacing: a coarse grid scan of the profiled score over the feasible
 * bracket locates sign changes; each is polished by a bisection/secant/inverse-
 * quadratic hybrid, and the root with the highest profile likelihood wins
 * (cross-checked against the grid maximum). Non-uniform spacing: golden-section
 * in sigma^2 nested inside a golden-section refinement of the lambda grid.
 *
 * Throws NoRootError when no sign change exists in the scanned bracket and
 * DegenerateError when the profiled variance collapses to zero.
 */
FitReport fit_sl(const TimeSeries& series, const FitOptions& options = {});

/// Joint log-likelihood evaluated at raw (lambda, sigma2); used by the general
/// spacing path and by curvature-based standard errors.
double log_likelihood_at(double lambda, double sigma2, const TimeSeries& series);

struct ForecastRow {
    double t;
    double emf;    // mean function anchored at the fit window start
    double ecmf;   // conditional mean anchored at the latest observation before t
    double lower;  // confidence bounds for X(t) given X(t1) = x1
    double upper;
};

/**
 * Point forecasts with confidence bounds at the requested times.
 *
 * EMF uses the fitted parameters anchored at (report.t1, report.x1). ECMF is
 * anchored at the latest observation of `series` strictly before t (the
 * previous observation for in-sample t, the last observation beyond the end);
 * at t = t1 it degenerates to x1. Plug-in of the ML estimates is justified by
 * their invariance property.
 */
std::vector<ForecastRow> estimated_trends(const FitReport& report, const TimeSeries& series,
                                          const std::vector<double>& horizon,
                                          double level = 0.95);

}  // namespace sldiff
