#include "sldiff/normal.hpp"

#include <cmath>

#include "sldiff/errors.hpp"

namespace sldiff {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kSqrt2Pi = 2.50662827463100050242;

// Acklam's rational approximation of the standard normal quantile.
// Relative error below 1.15e-9 on its own; a Halley refinement against the
// erfc-based CDF takes it to near machine precision.
double acklam(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double low = 0.02425;
    constexpr double high = 1.0 - low;

    if (p < low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > high) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_log_cdf(double x) {
    if (x > -8.0) {
        return std::log(normal_cdf(x));
    }
    // Lower tail: log(phi(x)/|x|) + log(asymptotic series), first two terms.
    double x2 = x * x;
    return -0.5 * x2 - std::log(-x * kSqrt2Pi) + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidInput("normal_quantile: p must lie in (0, 1)");
    }
    double x = acklam(p);
    // One Halley step: e = Phi(x) - p, u = e / phi(x).
    double e = normal_cdf(x) - p;
    double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double normal_two_sided_critical(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidInput("normal_two_sided_critical: level must lie in (0, 1)");
    }
    return normal_quantile(0.5 * (1.0 + level));
}

}  // namespace sldiff
