#include "sldiff/model.hpp"

#include <cmath>
#include <string>

#include "sldiff/normal.hpp"

namespace sldiff {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_time(double t, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw InvalidInput(std::string(who) + ": t must be finite and positive");
    }
}
}  // namespace

SlParams::SlParams(double lambda_, double sigma_) : lambda(lambda_), sigma(sigma_) {
    if (!std::isfinite(lambda) || lambda == 0.0) {
        throw InvalidInput("SlParams: lambda must be a nonzero finite real");
    }
    if (!std::isfinite(sigma) || sigma <= 0.0) {
        throw InvalidInput("SlParams: sigma must be positive");
    }
}

TimeWindow::TimeWindow(double t1_, double t_end_) : t1(t1_), t_end(t_end_) {
    if (!(t1 > 0.0) || !(t_end > t1) || !std::isfinite(t_end)) {
        throw InvalidInput("TimeWindow: need 0 < t1 < t_end");
    }
}

double phase(double lambda, double t) {
    if (std::isnan(lambda)) {
        throw InvalidInput("phase: lambda is NaN");
    }
    check_time(t, "phase");
    return 0.5 * kPi * std::exp(-lambda / t);
}

bool phase_in_domain(double lambda, double t) {
    if (std::isnan(lambda) || !(t > 0.0)) {
        return false;
    }
    double u = 0.5 * kPi * std::exp(-lambda / t);
    if (!(u > 0.0 && u < kPi)) {
        return false;
    }
    return std::abs(std::sin(u)) > detail::kSinPoleTol;
}

bool domain_guard_holds(double lambda, const TimeWindow& window) {
    // u(t) is monotone in t for fixed lambda and sin is concave on (0, pi),
    // so the interior never gets closer to a pole than the endpoints do.
    return phase_in_domain(lambda, window.t1) && phase_in_domain(lambda, window.t_end);
}

double detail::log_sin_phase(double lambda, double t) {
    double u = phase(lambda, t);
    if (!(u > 0.0 && u < kPi)) {
        throw DomainError("phase (pi/2)e^{-lambda/t} left (0, pi) at t = " + std::to_string(t));
    }
    double s = std::sin(u);
    if (std::abs(s) <= kSinPoleTol) {
        throw DomainError("sin(phase) pole at t = " + std::to_string(t));
    }
    return std::log(s);
}

double drift_coefficient(const SlParams& params, double t, double x) {
    check_time(t, "drift_coefficient");
    double u = phase(params.lambda, t);
    if (!(u > 0.0 && u < kPi)) {
        throw DomainError("drift_coefficient: phase left (0, pi)");
    }
    double s = std::sin(u);
    if (std::abs(s) <= detail::kSinPoleTol) {
        throw DomainError("drift_coefficient: cotangent pole");
    }
    double cot_u = std::cos(u) / s;
    double a = 2.0 / t - params.lambda +
               (params.lambda * kPi / (2.0 * t * t)) * std::exp(-params.lambda / t) * cot_u;
    return a * x;
}

double log_mean_increment(const SlParams& params, double s, double t, double x_s) {
    check_time(s, "log_mean_increment");
    check_time(t, "log_mean_increment");
    if (!(x_s > 0.0)) {
        throw InvalidInput("log_mean_increment: x_s must be positive");
    }
    if (!(s <= t)) {
        throw InvalidInput("log_mean_increment: need s <= t");
    }
    if (s == t) {
        return std::log(x_s);
    }
    double dt = t - s;
    return std::log(x_s) + 2.0 * std::log(t / s) - params.lambda * dt +
           detail::log_sin_phase(params.lambda, t) - detail::log_sin_phase(params.lambda, s) -
           0.5 * params.sigma2() * dt;
}

double transition_logpdf(const SlParams& params, double s, double t, double x_s, double y) {
    if (!(y > 0.0)) {
        throw InvalidInput("transition_logpdf: y must be positive");
    }
    if (!(s < t)) {
        throw InvalidInput("transition_logpdf: need s < t");
    }
    double dt = t - s;
    double mu = log_mean_increment(params, s, t, x_s);
    double v = params.sigma2() * dt;
    double d = std::log(y) - mu;
    return -std::log(y) - 0.5 * std::log(2.0 * kPi * v) - d * d / (2.0 * v);
}

double conditional_mean(const SlParams& params, double s, double t, double x_s) {
    check_time(s, "conditional_mean");
    check_time(t, "conditional_mean");
    if (!(x_s > 0.0)) {
        throw InvalidInput("conditional_mean: x_s must be positive");
    }
    if (!(s <= t)) {
        throw InvalidInput("conditional_mean: need s <= t");
    }
    if (s == t) {
        return x_s;
    }
    double ratio = t / s;
    return x_s * ratio * ratio *
           std::exp(detail::log_sin_phase(params.lambda, t) -
                    detail::log_sin_phase(params.lambda, s) - params.lambda * (t - s));
}

double mean_function(const SlParams& params, double t1, double x1, double t) {
    return conditional_mean(params, t1, t, x1);
}

double variance_function(const SlParams& params, double t1, double x1, double t) {
    double m = mean_function(params, t1, x1, t);
    return m * m * std::expm1(params.sigma2() * (t - t1));
}

Bounds confidence_bounds(const SlParams& params, double t1, double x1, double t, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidInput("confidence_bounds: level must lie in (0, 1)");
    }
    if (!(t >= t1)) {
        throw InvalidInput("confidence_bounds: need t >= t1");
    }
    double z = normal_two_sided_critical(level);
    double mu = log_mean_increment(params, t1, t, x1);
    double half_width = z * params.sigma * std::sqrt(t - t1);
    return {std::exp(mu - half_width), std::exp(mu + half_width)};
}

Eigen::ArrayXd mean_curve(const SlParams& params, double t1, double x1,
                          const Eigen::ArrayXd& times) {
    Eigen::ArrayXd out(times.size());
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        out[i] = mean_function(params, t1, x1, times[i]);
    }
    return out;
}

ConfidenceBand confidence_band(const SlParams& params, double t1, double x1,
                               const Eigen::ArrayXd& times, double level) {
    ConfidenceBand band;
    band.level = level;
    band.times = times;
    band.lower.resize(times.size());
    band.upper.resize(times.size());
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        Bounds b = confidence_bounds(params, t1, x1, times[i], level);
        band.lower[i] = b.lower;
        band.upper[i] = b.upper;
    }
    return band;
}

}  // namespace sldiff
