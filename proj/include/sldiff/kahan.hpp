#pragma once

namespace sldiff {

/// Compensated (Kahan) accumulator. Reductions over transitions sum
/// left-to-right through this so results are deterministic and tight.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace sldiff
