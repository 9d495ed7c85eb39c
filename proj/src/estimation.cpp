#include "sldiff/estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sldiff/kahan.hpp"

namespace sldiff {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kScaleGuard = 1e-300;

void require_guard(double lambda, const TimeSeries& series) {
    if (!phase_in_domain(lambda, series.front_time()) ||
        !phase_in_domain(lambda, series.back_time())) {
        throw DomainError("domain guard fails over the sample window at lambda = " +
                          std::to_string(lambda));
    }
}

bool guard_ok(double lambda, const TimeSeries& series) {
    return phase_in_domain(lambda, series.front_time()) &&
           phase_in_domain(lambda, series.back_time());
}

void require_uniform(const TimeSeries& series, const char* who) {
    if (!series.uniform_spacing()) {
        throw SpacingError(std::string(who) + ": requires uniform sample spacing");
    }
}

// d/dlambda of -ln sin(u(t)) contribution: (pi/(2t)) e^{-lambda/t} cot(u(t)).
double dlnsin_term(double lambda, double t) {
    double u = phase(lambda, t);
    double s = std::sin(u);
    if (std::abs(s) <= detail::kSinPoleTol) {
        throw DomainError("cotangent pole in dH/dlambda at t = " + std::to_string(t));
    }
    return (kPi / (2.0 * t)) * std::exp(-lambda / t) * (std::cos(u) / s);
}

double mean_h2(const std::vector<TransitionTerm>& terms) {
    KahanSum s;
    for (const auto& term : terms) {
        s.add(term.h_lambda * term.h_lambda);
    }
    return s.value() / static_cast<double>(terms.size());
}

double score_scale(const std::vector<TransitionTerm>& terms) {
    KahanSum s;
    for (const auto& term : terms) {
        s.add(std::abs(term.h_lambda * term.dh_dlambda));
    }
    return s.value() + kScaleGuard;
}

struct RootResult {
    double x;
    int iterations;
};

// Bracketed bisection/secant/inverse-quadratic hybrid (Brent).
template <typename F>
RootResult brent_root(F&& f, double a, double b, double fa, double fb, double tol) {
    if (fa == 0.0) return {a, 0};
    if (fb == 0.0) return {b, 0};
    double c = a, fc = fa;
    double d = b - a, e = d;
    int iter = 0;
    for (; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) {
            break;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double q0 = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return {b, iter};
}

// Golden-section maximizer on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol, int* evals = nullptr) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    int n = 2;
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
        if (++n > 400) break;
    }
    if (evals) *evals += n;
    return 0.5 * (a + b);
}

std::optional<std::array<double, 2>> hessian_std_errors(double lambda, double sigma2,
                                                        const TimeSeries& series) {
    const double hl = 1e-5 * std::max(1.0, std::abs(lambda));
    const double hs = 1e-5 * sigma2;
    auto f = [&](double l, double s2) { return log_likelihood_at(l, s2, series); };
    double f0 = f(lambda, sigma2);
    double dll = (f(lambda + hl, sigma2) - 2.0 * f0 + f(lambda - hl, sigma2)) / (hl * hl);
    double dss = (f(lambda, sigma2 + hs) - 2.0 * f0 + f(lambda, sigma2 - hs)) / (hs * hs);
    double dls = (f(lambda + hl, sigma2 + hs) - f(lambda + hl, sigma2 - hs) -
                  f(lambda - hl, sigma2 + hs) + f(lambda - hl, sigma2 - hs)) /
                 (4.0 * hl * hs);
    Eigen::Matrix2d info;
    info << -dll, -dls, -dls, -dss;
    // Observed information must be positive definite at an interior maximum.
    if (info(0, 0) <= 0.0 || info.determinant() <= 0.0) {
        return std::nullopt;
    }
    Eigen::Matrix2d cov = info.inverse();
    if (cov(0, 0) <= 0.0 || cov(1, 1) <= 0.0) {
        return std::nullopt;
    }
    double se_lambda = std::sqrt(cov(0, 0));
    double se_sigma2 = std::sqrt(cov(1, 1));
    double se_sigma = se_sigma2 / (2.0 * std::sqrt(sigma2));
    return std::array<double, 2>{se_lambda, se_sigma};
}

}  // namespace

std::vector<TransitionTerm> h_terms(double lambda, const TimeSeries& series) {
    require_guard(lambda, series);
    const auto& t = series.times();
    const auto& x = series.values();
    std::vector<TransitionTerm> terms;
    terms.reserve(static_cast<std::size_t>(series.size() - 1));
    double lnsin_prev = detail::log_sin_phase(lambda, t[0]);
    double dterm_prev = dlnsin_term(lambda, t[0]);
    for (Eigen::Index j = 0; j + 1 < series.size(); ++j) {
        double lnsin_next = detail::log_sin_phase(lambda, t[j + 1]);
        double dterm_next = dlnsin_term(lambda, t[j + 1]);
        double h = t[j + 1] - t[j];
        TransitionTerm term;
        term.j = j;
        term.h = h;
        term.h_lambda = std::log(x[j + 1] / x[j]) - 2.0 * std::log(t[j + 1] / t[j]) +
                        lambda * h - (lnsin_next - lnsin_prev);
        term.dh_dlambda = h + dterm_next - dterm_prev;
        terms.push_back(term);
        lnsin_prev = lnsin_next;
        dterm_prev = dterm_next;
    }
    return terms;
}

double log_likelihood_at(double lambda, double sigma2, const TimeSeries& series) {
    if (!(sigma2 > 0.0)) {
        throw InvalidInput("log_likelihood: sigma2 must be positive");
    }
    auto terms = h_terms(lambda, series);
    const auto& x = series.values();
    KahanSum ll;
    for (const auto& term : terms) {
        double g = term.h_lambda + 0.5 * sigma2 * term.h;
        ll.add(-std::log(x[term.j + 1]) - 0.5 * std::log(2.0 * kPi * sigma2 * term.h) -
               g * g / (2.0 * sigma2 * term.h));
    }
    return ll.value();
}

double log_likelihood(const SlParams& params, const TimeSeries& series) {
    return log_likelihood_at(params.lambda, params.sigma2(), series);
}

double sigma2_profile(double lambda, const TimeSeries& series) {
    require_uniform(series, "sigma2_profile");
    auto terms = h_terms(lambda, series);
    double h = series.spacing();
    return (2.0 / h) * (std::sqrt(1.0 + mean_h2(terms)) - 1.0);
}

double lambda_score(double lambda, const TimeSeries& series) {
    require_uniform(series, "lambda_score");
    auto terms = h_terms(lambda, series);
    double h = series.spacing();
    double s2 = (2.0 / h) * (std::sqrt(1.0 + mean_h2(terms)) - 1.0);
    KahanSum s;
    for (const auto& term : terms) {
        s.add((term.h_lambda + 0.5 * s2 * h) * term.dh_dlambda);
    }
    return s.value();
}

double profile_log_likelihood(double lambda, const TimeSeries& series) {
    double s2 = sigma2_profile(lambda, series);
    if (!(s2 > 0.0)) {
        throw DegenerateError("profile variance is zero");
    }
    return log_likelihood_at(lambda, s2, series);
}

double aic(double log_likelihood, int k) {
    if (k < 1) {
        throw InvalidInput("aic: k must be at least 1");
    }
    return 2.0 * k - 2.0 * log_likelihood;
}

namespace {

FitReport fit_uniform(const TimeSeries& series, const FitOptions& options) {
    const int n_grid = std::max(options.grid_points, 8);
    const double lo = options.bracket_lo, hi = options.bracket_hi;
    if (!(hi > lo)) {
        throw InvalidInput("fit_sl: empty bracket");
    }

    auto score = [&](double lam) { return lambda_score(lam, series); };

    // Coarse scan: sign changes of the score + profile-likelihood landscape.
    std::vector<double> grid_lambda(n_grid), grid_score(n_grid), grid_ll(n_grid);
    std::vector<bool> feasible(n_grid);
    double best_grid_ll = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_grid; ++i) {
        double lam = lo + (hi - lo) * i / (n_grid - 1);
        grid_lambda[i] = lam;
        feasible[i] = lam != 0.0 && guard_ok(lam, series);
        if (!feasible[i]) continue;
        grid_score[i] = score(lam);
        double s2 = sigma2_profile(lam, series);
        grid_ll[i] = s2 > 0.0 ? log_likelihood_at(lam, s2, series)
                              : -std::numeric_limits<double>::infinity();
        best_grid_ll = std::max(best_grid_ll, grid_ll[i]);
    }

    struct Candidate {
        double lambda;
        double ll;
    };
    std::vector<Candidate> roots;
    int iterations = 0;
    for (int i = 0; i + 1 < n_grid; ++i) {
        if (!feasible[i] || !feasible[i + 1]) continue;
        if ((grid_score[i] > 0.0) == (grid_score[i + 1] > 0.0)) continue;
        auto r = brent_root(score, grid_lambda[i], grid_lambda[i + 1], grid_score[i],
                            grid_score[i + 1], options.tol);
        iterations += r.iterations;
        double s2 = sigma2_profile(r.x, series);
        double ll = s2 > 0.0 ? log_likelihood_at(r.x, s2, series)
                             : -std::numeric_limits<double>::infinity();
        roots.push_back({r.x, ll});
    }
    if (roots.empty()) {
        throw NoRootError("fit_sl: no sign change of the score in the scanned bracket");
    }
    const auto best =
        std::max_element(roots.begin(), roots.end(),
                         [](const Candidate& a, const Candidate& b) { return a.ll < b.ll; });
    if (best_grid_ll > best->ll + 1e-6 * (1.0 + std::abs(best->ll))) {
        throw NoRootError(
            "fit_sl: profile likelihood peaks away from every score root (widen the bracket)");
    }

    double lam = best->lambda;
    double s2 = sigma2_profile(lam, series);
    if (!(s2 > 0.0)) {
        throw DegenerateError("fit_sl: profiled variance is zero (deterministic data)");
    }

    auto terms = h_terms(lam, series);
    double residual = std::abs(lambda_score(lam, series)) / score_scale(terms);

    FitReport report{SlParams(lam, std::sqrt(s2)),
                     log_likelihood_at(lam, s2, series),
                     0.0,
                     static_cast<int>(series.size() - 1),
                     SolverInfo{lo, hi, iterations, residual, residual <= 1e-9},
                     SpacingMode::uniform,
                     series.front_time(),
                     series.front_value(),
                     std::nullopt};
    report.aic = aic(report.log_likelihood, 2);
    if (options.with_std_errors) {
        report.std_errors = hessian_std_errors(lam, s2, series);
    }
    return report;
}

FitReport fit_general(const TimeSeries& series, const FitOptions& options) {
    const int n_grid = std::max(options.grid_points, 8);
    const double lo = options.bracket_lo, hi = options.bracket_hi;
    int evals = 0;

    // Inner profile over sigma^2 by golden-section in log space.
    auto inner = [&](double lam) -> std::pair<double, double> {
        auto obj = [&](double w) { return log_likelihood_at(lam, std::exp(w), series); };
        double w = golden_max(obj, std::log(1e-12), std::log(1e2), 1e-11, &evals);
        double s2 = std::exp(w);
        return {s2, log_likelihood_at(lam, s2, series)};
    };

    int best_i = -1;
    double best_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> grid_lambda(n_grid);
    std::vector<bool> feasible(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        double lam = lo + (hi - lo) * i / (n_grid - 1);
        grid_lambda[i] = lam;
        feasible[i] = lam != 0.0 && guard_ok(lam, series);
        if (!feasible[i]) continue;
        double ll = inner(lam).second;
        if (ll > best_ll) {
            best_ll = ll;
            best_i = i;
        }
    }
    if (best_i < 0) {
        throw NoRootError("fit_sl: no feasible lambda in the bracket");
    }
    double refine_lo = grid_lambda[std::max(0, best_i - 1)];
    double refine_hi = grid_lambda[std::min(n_grid - 1, best_i + 1)];
    auto profile = [&](double lam) {
        if (lam == 0.0 || !guard_ok(lam, series)) {
            return -std::numeric_limits<double>::infinity();
        }
        return inner(lam).second;
    };
    double lam = golden_max(profile, refine_lo, refine_hi, std::max(options.tol, 1e-11), &evals);
    auto [s2, ll] = inner(lam);
    if (!(s2 > 1e-11)) {
        throw DegenerateError("fit_sl: profiled variance collapsed to the lower bound");
    }

    // Scaled stationarity residual from the analytic lambda gradient,
    // normalized the same way as the uniform-path score.
    auto terms = h_terms(lam, series);
    KahanSum grad;
    double h_mean = 0.0;
    for (const auto& term : terms) {
        grad.add(-(term.h_lambda + 0.5 * s2 * term.h) * term.dh_dlambda / (s2 * term.h));
        h_mean += term.h;
    }
    h_mean /= static_cast<double>(terms.size());
    double residual = std::abs(grad.value()) * s2 * h_mean / score_scale(terms);

    FitReport report{SlParams(lam, std::sqrt(s2)),
                     ll,
                     0.0,
                     static_cast<int>(series.size() - 1),
                     SolverInfo{lo, hi, evals, residual, residual <= 1e-6},
                     SpacingMode::general,
                     series.front_time(),
                     series.front_value(),
                     std::nullopt};
    report.aic = aic(report.log_likelihood, 2);
    if (options.with_std_errors) {
        report.std_errors = hessian_std_errors(lam, s2, series);
    }
    return report;
}

}  // namespace

FitReport fit_sl(const TimeSeries& series, const FitOptions& options) {
    if (!(options.tol > 0.0)) {
        throw InvalidInput("fit_sl: tol must be positive");
    }
    if (series.uniform_spacing() && !options.force_general) {
        return fit_uniform(series, options);
    }
    return fit_general(series, options);
}

std::vector<ForecastRow> estimated_trends(const FitReport& report, const TimeSeries& series,
                                          const std::vector<double>& horizon, double level) {
    std::vector<ForecastRow> rows;
    rows.reserve(horizon.size());
    const auto& t = series.times();
    const auto& x = series.values();
    for (double th : horizon) {
        if (!(th >= report.t1)) {
            throw InvalidInput("estimated_trends: horizon time precedes the fit anchor");
        }
        // Latest observation strictly before th; at th = t1 the anchor is (t1, x1).
        Eigen::Index k = -1;
        for (Eigen::Index i = 0; i < series.size() && t[i] < th; ++i) {
            k = i;
        }
        double anchor_t = k >= 0 ? t[k] : t[0];
        double anchor_x = k >= 0 ? x[k] : x[0];
        ForecastRow row;
        row.t = th;
        row.emf = mean_function(report.params, report.t1, report.x1, th);
        row.ecmf = conditional_mean(report.params, anchor_t, th, anchor_x);
        Bounds b = confidence_bounds(report.params, report.t1, report.x1, th, level);
        row.lower = b.lower;
        row.upper = b.upper;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sldiff
