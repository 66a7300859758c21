#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "crtarmor/mle_residue.hpp"
#include "crtarmor/modular.hpp"
#include "crtarmor/rng.hpp"

using namespace crtarmor;

namespace {

std::vector<std::pair<std::size_t, double>> tag(const std::vector<double>& values) {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t i = 0; i < values.size(); ++i) out.emplace_back(i, values[i]);
    return out;
}

double grid_argmin(const std::vector<double>& values, const std::vector<double>& weights,
                   double lo, double hi, double step) {
    double best_x = lo, best = -1.0;
    for (double x = lo; x <= hi + step / 2; x += step) {
        double obj = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            obj += weights[i] * (values[i] - x) * (values[i] - x);
        if (best < 0.0 || obj < best) {
            best = obj;
            best_x = x;
        }
    }
    return best_x;
}

}  // namespace

TEST_CASE("trimming drops values outside every crowded window") {
    const auto trimmed = trim_outliers(tag({0.5, 1.0, 1.5, 3.8}), 1.0, 2);
    CHECK(trimmed.values == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(trimmed.labels == std::vector<std::size_t>{0, 1, 2});

    const auto all_equal = trim_outliers(tag({2.0, 2.0, 2.0}), 1.0, 2);
    CHECK(all_equal.size() == 3);

    const auto snug = trim_outliers(tag({0.5, 1.0, 1.5}), 1.0, 2);
    CHECK(snug.size() == 3);
    const auto [lo, hi] = std::minmax_element(snug.values.begin(), snug.values.end());
    CHECK(*hi - *lo <= 4.0);

    CHECK_THROWS_WITH_AS(trim_outliers(tag({0.0, 10.0, 20.0}), 1.0, 2),
                         doctest::Contains("TooFewSurvivors"), Error);
}

TEST_CASE("circular estimate handles wrap-around") {
    CHECK(mle_circular({1.5, 0.5, 1.0}, {}, 4) == doctest::Approx(1.0));
    CHECK(mle_circular({2.75}, {}, 4) == doctest::Approx(2.75));
    CHECK(mle_circular({0.1, 3.9}, {}, 4) == doctest::Approx(0.0));
    CHECK_THROWS_WITH_AS(mle_circular({}, {}, 4), doctest::Contains("EmptyInput"), Error);
}

TEST_CASE("circular estimate beats every grid point") {
    Rng rng(31);
    for (int t = 0; t < 300; ++t) {
        const std::uint64_t gamma = 4 + rng.uniform_u64(0, 28);
        const std::size_t n = 1 + rng.uniform_u64(0, 5);
        std::vector<double> values(n), variances(n);
        for (std::size_t i = 0; i < n; ++i) {
            values[i] = rng.uniform01() * static_cast<double>(gamma);
            variances[i] = 0.25 + rng.uniform01() * 4.0;
        }
        const double x = mle_circular(values, variances, gamma);

        const auto objective = [&](double at) {
            double obj = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = circle_distance(values[i], at, gamma);
                obj += d * d / variances[i];
            }
            return obj;
        };
        const double fx = objective(x);
        const double step = static_cast<double>(gamma) * 1e-4;
        for (double at = 0.0; at < static_cast<double>(gamma); at += step)
            CHECK(fx <= objective(at) + 1e-6);
    }
}

TEST_CASE("closed form weights by inverse variance") {
    NoiseModel noise{{1.0, 1.0, 0.5}};
    TrimmedSet trimmed{{0, 1, 2}, {1.5, 0.5, 1.0}};
    CHECK(mle_closed_form(trimmed, noise) == doctest::Approx(1.0));

    TrimmedSet plain{{0, 1, 2}, {1.5, 0.5, 1.0}};
    CHECK(mle_closed_form(plain, NoiseModel{}) == doctest::Approx(1.0));

    TrimmedSet single{{0}, {2.25}};
    CHECK(mle_closed_form(single, NoiseModel{}) == doctest::Approx(2.25));

    CHECK_THROWS_WITH_AS(mle_closed_form(TrimmedSet{}, NoiseModel{}),
                         doctest::Contains("EmptyInput"), Error);
}

TEST_CASE("closed form matches a dense grid search") {
    Rng rng(32);
    for (int t = 0; t < 300; ++t) {
        const std::uint64_t gamma = 8 + rng.uniform_u64(0, 192);
        const double delta = static_cast<double>(gamma) / 8.0;
        const std::size_t n = 2 + rng.uniform_u64(0, 6);

        TrimmedSet trimmed;
        NoiseModel noise;
        const double base = rng.uniform(-static_cast<double>(gamma) / 2, static_cast<double>(gamma) / 2);
        std::vector<double> weights;
        for (std::size_t i = 0; i < n; ++i) {
            trimmed.labels.push_back(i);
            trimmed.values.push_back(base + rng.uniform(0.0, 4.0 * delta));
            noise.variances.push_back(0.25 + rng.uniform01() * 4.0);
            weights.push_back(1.0 / noise.variances.back());
        }

        const double closed = mle_closed_form(trimmed, noise);
        const auto [lo, hi] = std::minmax_element(trimmed.values.begin(), trimmed.values.end());
        const double grid =
            grid_argmin(trimmed.values, weights, *lo, *hi, static_cast<double>(gamma) * 1e-5);
        CHECK(std::fabs(closed - grid) <= 1e-4 * static_cast<double>(gamma));
    }
}

TEST_CASE("weighted residuals cancel at the estimate") {
    Rng rng(33);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng.uniform_u64(0, 6);
        TrimmedSet trimmed;
        NoiseModel noise;
        for (std::size_t i = 0; i < n; ++i) {
            trimmed.labels.push_back(i);
            trimmed.values.push_back(rng.uniform(-10.0, 10.0));
            noise.variances.push_back(0.25 + rng.uniform01() * 4.0);
        }
        const double x = mle_closed_form(trimmed, noise);
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            residual += (trimmed.values[i] - x) / noise.variances[i];
        CHECK(std::fabs(residual) <= 1e-9 * static_cast<double>(n) * 20.0);
    }
}

TEST_CASE("circular and unwrapped estimates agree on narrow spreads") {
    Rng rng(34);
    for (int t = 0; t < 300; ++t) {
        const std::uint64_t gamma = 16 + rng.uniform_u64(0, 100);
        const std::size_t n = 2 + rng.uniform_u64(0, 4);
        const double center = rng.uniform01() * static_cast<double>(gamma);

        TrimmedSet trimmed;
        std::vector<double> wrapped, variances;
        NoiseModel noise;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = center + rng.uniform((-0.2) * static_cast<double>(gamma),
                                                  0.2 * static_cast<double>(gamma));
            trimmed.labels.push_back(i);
            trimmed.values.push_back(v);
            wrapped.push_back(common_residue(v, gamma).value);
            variances.push_back(0.5 + rng.uniform01());
            noise.variances.push_back(variances.back());
        }
        const double circular = mle_circular(wrapped, variances, gamma);
        const double unwrapped = mle_closed_form(trimmed, noise);
        CHECK(circle_distance(circular, common_residue(unwrapped, gamma).value, gamma) ==
              doctest::Approx(0.0).epsilon(1e-6));
    }
}
