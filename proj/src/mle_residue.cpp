#include "crtarmor/mle_residue.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crtarmor/modular.hpp"

namespace crtarmor {

TrimmedSet trim_outliers(const std::vector<std::pair<std::size_t, double>>& values, double delta,
                         std::size_t K) {
    if (values.empty()) raise(Errc::EmptyInput, "nothing to trim");
    const double width = 2.0 * delta;

    std::vector<bool> keep(values.size(), false);
    for (const auto& [anchor_label, anchor] : values) {
        for (const double lo : {anchor, anchor - width}) {
            std::size_t inside = 0;
            for (const auto& [label, v] : values)
                if (v >= lo && v <= lo + width) ++inside;
            if (inside >= K) {
                for (std::size_t i = 0; i < values.size(); ++i)
                    if (values[i].second >= lo && values[i].second <= lo + width) keep[i] = true;
            }
        }
    }

    TrimmedSet out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!keep[i]) continue;
        out.labels.push_back(values[i].first);
        out.values.push_back(values[i].second);
    }
    if (out.size() < K)
        raise(Errc::TooFewSurvivors, "only " + std::to_string(out.size()) +
                                         " values inside a qualifying window, need " +
                                         std::to_string(K));
    return out;
}

double mle_circular(const std::vector<double>& values, const std::vector<double>& variances,
                    std::uint64_t gamma) {
    if (values.empty()) raise(Errc::EmptyInput, "no values");
    if (!variances.empty() && variances.size() != values.size())
        raise(Errc::InvalidArgument, "variance count mismatch");

    const std::size_t n = values.size();
    std::vector<double> weights(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!variances.empty()) {
            if (!(variances[i] > 0.0)) raise(Errc::InvalidArgument, "variances must be positive");
            weights[i] = 1.0 / variances[i];
        }
    }
    const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    const auto objective = [&](double x) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = circle_distance(values[i], x, gamma);
            total += weights[i] * d * d;
        }
        return total;
    };

    // One candidate per rotation: the k smallest values lifted by gamma.
    double best_x = 0.0;
    double best_obj = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t idx = order[i];
            const double lifted = values[idx] + (i < k ? static_cast<double>(gamma) : 0.0);
            acc += weights[idx] * lifted;
        }
        const double candidate = common_residue(acc / weight_sum, gamma).value;
        const double obj = objective(candidate);
        if (first || obj < best_obj - 1e-12 ||
            (std::fabs(obj - best_obj) <= 1e-12 && candidate < best_x)) {
            best_x = candidate;
            best_obj = obj;
            first = false;
        }
    }
    return best_x;
}

double mle_closed_form(const TrimmedSet& trimmed, const NoiseModel& noise) {
    if (trimmed.values.empty()) raise(Errc::EmptyInput, "empty trimmed set");

    double weighted = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < trimmed.values.size(); ++i) {
        const double variance = noise.variance(trimmed.labels[i]);
        if (!(variance > 0.0)) raise(Errc::InvalidArgument, "variances must be positive");
        weighted += trimmed.values[i] / variance;
        weight_sum += 1.0 / variance;
    }
    const double mean = weighted / weight_sum;

    const auto [lo, hi] = std::minmax_element(trimmed.values.begin(), trimmed.values.end());
    return std::clamp(mean, *lo, *hi);
}

}  // namespace crtarmor
