#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sldiff/errors.hpp"

namespace sldiff {

/**
 * A discretely sampled trajectory: strictly increasing positive times and
 * strictly positive observations. The fitting and forecasting substrate.
 *
 * Spacing is classified on construction: the series is uniform when every
 * gap agrees with h = t_2 - t_1 to within 1e-9.
 */
class TimeSeries {
public:
    TimeSeries(Eigen::ArrayXd times, Eigen::ArrayXd values, std::string label = "");
    TimeSeries(const std::vector<double>& times, const std::vector<double>& values,
               std::string label = "");

    const Eigen::ArrayXd& times() const { return times_; }
    const Eigen::ArrayXd& values() const { return values_; }
    const std::string& label() const { return label_; }

    Eigen::Index size() const { return times_.size(); }
    double time(Eigen::Index i) const { return times_[i]; }
    double value(Eigen::Index i) const { return values_[i]; }
    double front_time() const { return times_[0]; }
    double front_value() const { return values_[0]; }
    double back_time() const { return times_[times_.size() - 1]; }
    double back_value() const { return values_[values_.size() - 1]; }

    bool uniform_spacing() const { return uniform_; }
    /// Common gap t_2 - t_1; meaningful only when uniform_spacing() is true.
    double spacing() const { return h_; }

    /// Observations with lo <= t <= hi. Throws ValidationError if fewer than 2 remain.
    TimeSeries slice(double lo, double hi) const;

private:
    Eigen::ArrayXd times_;
    Eigen::ArrayXd values_;
    std::string label_;
    bool uniform_ = false;
    double h_ = 0.0;
};

}  // namespace sldiff
