#include "sldiff/series.hpp"

#include <cmath>
#include <utility>

namespace sldiff {

namespace {
constexpr double kUniformTol = 1e-9;
}

TimeSeries::TimeSeries(Eigen::ArrayXd times, Eigen::ArrayXd values, std::string label)
    : times_(std::move(times)), values_(std::move(values)), label_(std::move(label)) {
    const Eigen::Index n = times_.size();
    if (n != values_.size()) {
        throw LengthMismatch("TimeSeries: times and values differ in length");
    }
    if (n < 2) {
        throw ValidationError("TimeSeries: need at least 2 observations");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(times_[i]) || times_[i] <= 0.0) {
            throw ValidationError("TimeSeries: times must be finite and positive");
        }
        if (!std::isfinite(values_[i]) || values_[i] <= 0.0) {
            throw ValidationError("TimeSeries: values must be finite and positive");
        }
        if (i > 0 && times_[i] <= times_[i - 1]) {
            throw ValidationError("TimeSeries: times must be strictly increasing");
        }
    }
    h_ = times_[1] - times_[0];
    uniform_ = true;
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        if (std::abs((times_[j + 1] - times_[j]) - h_) > kUniformTol) {
            uniform_ = false;
            break;
        }
    }
}

TimeSeries::TimeSeries(const std::vector<double>& times, const std::vector<double>& values,
                       std::string label)
    : TimeSeries(Eigen::Map<const Eigen::ArrayXd>(times.data(),
                                                  static_cast<Eigen::Index>(times.size())),
                 Eigen::Map<const Eigen::ArrayXd>(values.data(),
                                                  static_cast<Eigen::Index>(values.size())),
                 std::move(label)) {}

TimeSeries TimeSeries::slice(double lo, double hi) const {
    std::vector<double> t, v;
    for (Eigen::Index i = 0; i < size(); ++i) {
        if (times_[i] >= lo && times_[i] <= hi) {
            t.push_back(times_[i]);
            v.push_back(values_[i]);
        }
    }
    if (t.size() < 2) {
        throw ValidationError("TimeSeries::slice: range selects fewer than 2 observations");
    }
    return TimeSeries(t, v, label_);
}

}  // namespace sldiff
