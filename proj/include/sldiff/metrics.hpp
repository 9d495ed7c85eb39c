#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

#include "sldiff/errors.hpp"

namespace sldiff {

/// Lewis MAPE accuracy scale: < 10 high, < 20 good, <= 50 reasonable,
/// above that inaccurate.
enum class AccuracyClass { high, good, reasonable, inaccurate };

std::string to_string(AccuracyClass c);

struct AccuracyReport {
    double mae;
    double rmse;
    /// Mean absolute percentage error, percent, relative to the observed
    /// values: (100/n) sum |e_i| / x_i.
    double mape;
    /// Same numerators divided by the predicted values instead. Published
    /// MAPE figures are sometimes computed this way; reported alongside so
    /// either convention can be checked.
    std::optional<double> mape_vs_predicted;
    Eigen::Index n;
    AccuracyClass classification;  // from mape
};

/// MAE, RMSE and MAPE of predictions against observations.
/// Throws LengthMismatch on unequal lengths and InvalidInput when an observed
/// value is not strictly positive (MAPE divides by it).
AccuracyReport accuracy(const Eigen::ArrayXd& observed, const Eigen::ArrayXd& predicted);

}  // namespace sldiff
