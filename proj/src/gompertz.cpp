#include "sldiff/gompertz.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sldiff/kahan.hpp"

namespace sldiff {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

GompertzParams::GompertzParams(double lambda_, double beta_, double sigma_)
    : lambda(lambda_), beta(beta_), sigma(sigma_) {
    if (!std::isfinite(lambda)) {
        throw InvalidInput("GompertzParams: lambda must be finite");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw InvalidInput("GompertzParams: beta must be positive");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidInput("GompertzParams: sigma must be positive");
    }
}

namespace {

struct MomentPair {
    double mean;
    double var;
};

// Conditional moments of ln X(t) given ln X(s); expm1 keeps the beta -> 0
// (geometric Brownian motion) limit accurate.
MomentPair log_moments(const GompertzParams& p, double log_xs, double dt) {
    double em = -std::expm1(-p.beta * dt);  // 1 - e^{-beta dt}
    double mean = (1.0 - em) * log_xs + (p.lambda - 0.5 * p.sigma2()) * (em / p.beta);
    double var = p.sigma2() * (-std::expm1(-2.0 * p.beta * dt)) / (2.0 * p.beta);
    return {mean, var};
}

double transition_term(const GompertzParams& p, double log_xs, double log_y, double dt) {
    MomentPair mp = log_moments(p, log_xs, dt);
    double d = log_y - mp.mean;
    return -log_y - 0.5 * std::log(2.0 * kPi * mp.var) - d * d / (2.0 * mp.var);
}

}  // namespace

double gompertz_transition_logpdf(const GompertzParams& params, double s, double t, double x_s,
                                  double y) {
    if (!(x_s > 0.0) || !(y > 0.0)) {
        throw InvalidInput("gompertz_transition_logpdf: states must be positive");
    }
    if (!(s < t)) {
        throw InvalidInput("gompertz_transition_logpdf: need s < t");
    }
    return transition_term(params, std::log(x_s), std::log(y), t - s);
}

double gompertz_log_likelihood(const GompertzParams& params, const TimeSeries& series) {
    const auto& t = series.times();
    const auto& x = series.values();
    KahanSum ll;
    for (Eigen::Index j = 0; j + 1 < series.size(); ++j) {
        ll.add(transition_term(params, std::log(x[j]), std::log(x[j + 1]), t[j + 1] - t[j]));
    }
    return ll.value();
}

namespace {

struct Ar1Fit {
    double slope;
    double intercept;
    double resid_var;  // ML variant: RSS / n_transitions
};

Ar1Fit ar1_regression(const TimeSeries& series) {
    const Eigen::Index m = series.size() - 1;
    Eigen::ArrayXd y0 = series.values().head(m).log();
    Eigen::ArrayXd y1 = series.values().tail(m).log();
    double my0 = y0.mean(), my1 = y1.mean();
    Eigen::ArrayXd c0 = y0 - my0;
    double slope = (c0 * (y1 - my1)).sum() / c0.square().sum();
    double intercept = my1 - slope * my0;
    double rss = (y1 - slope * y0 - intercept).square().sum();
    return {slope, intercept, rss / static_cast<double>(m)};
}

std::optional<std::array<double, 3>> gompertz_std_errors(const GompertzParams& p,
                                                         const TimeSeries& series) {
    // Observed information from centered second differences in (lambda, beta, sigma2).
    std::array<double, 3> theta{p.lambda, p.beta, p.sigma2()};
    std::array<double, 3> step{1e-5 * std::max(1.0, std::abs(p.lambda)), 1e-5 * p.beta,
                               1e-5 * p.sigma2()};
    auto f = [&](const std::array<double, 3>& th) {
        return gompertz_log_likelihood(GompertzParams(th[0], th[1], std::sqrt(th[2])), series);
    };
    Eigen::Matrix3d hess;
    double f0 = f(theta);
    for (int i = 0; i < 3; ++i) {
        for (int k = i; k < 3; ++k) {
            auto tpp = theta, tpm = theta, tmp = theta, tmm = theta;
            if (i == k) {
                tpp[i] += step[i];
                tmm[i] -= step[i];
                hess(i, i) = (f(tpp) - 2.0 * f0 + f(tmm)) / (step[i] * step[i]);
            } else {
                tpp[i] += step[i]; tpp[k] += step[k];
                tpm[i] += step[i]; tpm[k] -= step[k];
                tmp[i] -= step[i]; tmp[k] += step[k];
                tmm[i] -= step[i]; tmm[k] -= step[k];
                hess(i, k) = hess(k, i) =
                    (f(tpp) - f(tpm) - f(tmp) + f(tmm)) / (4.0 * step[i] * step[k]);
            }
        }
    }
    Eigen::Matrix3d info = -hess;
    Eigen::LLT<Eigen::Matrix3d> llt(info);
    if (llt.info() != Eigen::Success) {
        return std::nullopt;
    }
    Eigen::Matrix3d cov = info.inverse();
    if (cov(0, 0) <= 0.0 || cov(1, 1) <= 0.0 || cov(2, 2) <= 0.0) {
        return std::nullopt;
    }
    double se_sigma = std::sqrt(cov(2, 2)) / (2.0 * p.sigma);
    return std::array<double, 3>{std::sqrt(cov(0, 0)), std::sqrt(cov(1, 1)), se_sigma};
}

}  // namespace

GompertzFitReport fit_gompertz(const TimeSeries& series, const GompertzFitOptions& options) {
    const double m = static_cast<double>(series.size() - 1);
    double h = (series.back_time() - series.front_time()) / m;

    // Start from the log-space AR(1) regression when it lands in the feasible
    // set; otherwise from a mildly mean-reverting interior point.
    double lambda, beta, sigma2;
    Ar1Fit reg = ar1_regression(series);
    if (series.uniform_spacing() && reg.slope > 0.0 && reg.slope < 1.0 && reg.resid_var > 0.0) {
        beta = -std::log(reg.slope) / h;
        sigma2 = 2.0 * beta * reg.resid_var / (1.0 - reg.slope * reg.slope);
        lambda = reg.intercept * beta / (1.0 - reg.slope) + 0.5 * sigma2;
    } else {
        beta = 1e-3;
        sigma2 = std::max(reg.resid_var / h, options.sigma2_lo * 10.0);
        lambda = (std::log(series.back_value() / series.front_value())) /
                     (series.back_time() - series.front_time()) +
                 beta * std::log(series.front_value()) + 0.5 * sigma2;
    }
    lambda = std::clamp(lambda, options.lambda_lo, options.lambda_hi);
    beta = std::clamp(beta, options.beta_lo, options.beta_hi);
    sigma2 = std::clamp(sigma2, options.sigma2_lo, options.sigma2_hi);

    auto ll_at = [&](double l, double b, double s2) {
        return gompertz_log_likelihood(GompertzParams(l, b, std::sqrt(s2)), series);
    };

    constexpr double invphi = 0.6180339887498949;
    auto line_max = [&](std::function<double(double)> f, double lo, double hi, double tol) {
        double a = lo, b = hi;
        double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int i = 0; i < 200 && b - a > tol; ++i) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + invphi * (b - a);
                f2 = f(x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - invphi * (b - a);
                f1 = f(x1);
            }
        }
        return 0.5 * (a + b);
    };

    double ll = ll_at(lambda, beta, sigma2);
    int rounds = 0;
    bool converged = false;
    for (; rounds < options.max_rounds; ++rounds) {
        double before = ll;
        double l0 = lambda, b0 = beta, s0 = sigma2;
        lambda = line_max([&](double l) { return ll_at(l, beta, sigma2); }, options.lambda_lo,
                          options.lambda_hi, 1e-11);
        // beta and sigma2 searched in log space: both live on (0, inf).
        double wb = line_max([&](double w) { return ll_at(lambda, std::exp(w), sigma2); },
                             std::log(options.beta_lo), std::log(options.beta_hi), 1e-11);
        beta = std::exp(wb);
        double ws = line_max([&](double w) { return ll_at(lambda, beta, std::exp(w)); },
                             std::log(options.sigma2_lo), std::log(options.sigma2_hi), 1e-11);
        sigma2 = std::exp(ws);
        ll = ll_at(lambda, beta, sigma2);
        if (ll < before) {  // round only jittered within solver tolerance; keep the incumbent
            lambda = l0;
            beta = b0;
            sigma2 = s0;
            ll = before;
        }
        if (ll - before <= options.tol) {
            converged = true;
            ++rounds;
            break;
        }
    }
    if (!converged) {
        throw NoConvergenceError("fit_gompertz: coordinate ascent did not converge");
    }

    bool boundary = beta <= options.beta_lo * (1.0 + 1e-6) || beta >= options.beta_hi * (1.0 - 1e-6);

    GompertzFitReport report{GompertzParams(lambda, beta, std::sqrt(sigma2)),
                             ll,
                             2.0 * 3 - 2.0 * ll,
                             static_cast<int>(series.size() - 1),
                             rounds,
                             converged,
                             boundary,
                             std::nullopt};
    if (options.with_std_errors) {
        report.std_errors = gompertz_std_errors(report.params, series);
    }
    return report;
}

}  // namespace sldiff
