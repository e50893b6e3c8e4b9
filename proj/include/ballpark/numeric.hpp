#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace ballpark {

// Compensated summation; keeps reductions deterministic for a fixed ordering
// and accurate over wide magnitude ranges.
class KahanSum {
public:
    void add(double x) noexcept {
        const double y = x - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const noexcept { return sum_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

// Sum that is invariant under permutation of the inputs: sorting first fixes
// the accumulation order no matter how the values were produced.
inline double permutation_invariant_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    KahanSum sum;
    for (const double v : values) sum.add(v);
    return sum.value();
}

}  // namespace ballpark
