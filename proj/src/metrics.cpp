#include "sldiff/metrics.hpp"

#include <cmath>

#include "sldiff/kahan.hpp"

namespace sldiff {

std::string to_string(AccuracyClass c) {
    switch (c) {
        case AccuracyClass::high: return "high";
        case AccuracyClass::good: return "good";
        case AccuracyClass::reasonable: return "reasonable";
        case AccuracyClass::inaccurate: return "inaccurate";
    }
    return "?";
}

AccuracyReport accuracy(const Eigen::ArrayXd& observed, const Eigen::ArrayXd& predicted) {
    const Eigen::Index n = observed.size();
    if (n != predicted.size()) {
        throw LengthMismatch("accuracy: observed and predicted differ in length");
    }
    if (n < 1) {
        throw InvalidInput("accuracy: need at least one pair");
    }

    KahanSum abs_sum, sq_sum, pct_sum, pct_pred_sum;
    bool predicted_positive = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(observed[i] > 0.0)) {
            throw InvalidInput("accuracy: observed values must be strictly positive");
        }
        double e = observed[i] - predicted[i];
        abs_sum.add(std::abs(e));
        sq_sum.add(e * e);
        pct_sum.add(std::abs(e) / observed[i]);
        if (predicted[i] > 0.0) {
            pct_pred_sum.add(std::abs(e) / predicted[i]);
        } else {
            predicted_positive = false;
        }
    }

    AccuracyReport report;
    report.n = n;
    double dn = static_cast<double>(n);
    report.mae = abs_sum.value() / dn;
    report.rmse = std::sqrt(sq_sum.value() / dn);
    report.mape = 100.0 * pct_sum.value() / dn;
    report.mape_vs_predicted =
        predicted_positive ? std::optional<double>(100.0 * pct_pred_sum.value() / dn)
                           : std::nullopt;
    if (report.mape < 10.0) {
        report.classification = AccuracyClass::high;
    } else if (report.mape < 20.0) {
        report.classification = AccuracyClass::good;
    } else if (report.mape <= 50.0) {
        report.classification = AccuracyClass::reasonable;
    } else {
        report.classification = AccuracyClass::inaccurate;
    }
    return report;
}

}  // namespace sldiff
