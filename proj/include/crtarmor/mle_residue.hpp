#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "crtarmor/errors.hpp"

namespace crtarmor {

// Per-set noise variances sigma_l^2, indexed by set label. An empty model
// means unit variance everywhere, which reduces the weighted estimates to
// plain means.
struct NoiseModel {
    std::vector<double> variances;

    static NoiseModel uniform(std::size_t count) { return {std::vector<double>(count, 1.0)}; }

    double variance(std::size_t label) const {
        return variances.empty() ? 1.0 : variances.at(label);
    }
};

struct TrimmedSet {
    std::vector<std::size_t> labels;  // one entry per retained value (labels may repeat)
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

// Drops every value not covered by some window [y, y + 2*delta] holding at
// least K of the values. Candidate windows are anchored at the values
// themselves, which is exhaustive: any qualifying window can slide until its
// edge touches a value. After trimming the spread is at most 4*delta.
TrimmedSet trim_outliers(const std::vector<std::pair<std::size_t, double>>& values, double delta,
                         std::size_t K);

// Minimiser over [0, gamma) of the variance-weighted squared circular
// distance to the given wrapped values. Evaluates one candidate circular
// mean per cyclic rotation of the sorted values; ties go to the smallest x.
// `variances` pairs positionally with `values`; empty means unit variances.
double mle_circular(const std::vector<double>& values, const std::vector<double>& variances,
                    std::uint64_t gamma);

// Closed form of the same objective once the values are unwrapped and span
// less than half the circle: the variance-weighted mean of the retained
// values, constrained to [min value, max value].
double mle_closed_form(const TrimmedSet& trimmed, const NoiseModel& noise);

}  // namespace crtarmor
