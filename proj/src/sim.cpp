#include "crtarmor/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "crtarmor/multi_crt.hpp"
#include "crtarmor/reconstruct_arbitrary.hpp"
#include "crtarmor/rng.hpp"

namespace crtarmor {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

std::size_t thread_budget(std::size_t work_items) {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* cap = std::getenv("CRT_ARMOR_THREADS")) {
        const long parsed = std::strtol(cap, nullptr, 10);
        if (parsed >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(parsed));
    }
    return std::max<std::size_t>(1, std::min(n, work_items));
}

std::uint64_t effective_value_bound(const SimConfig& config) {
    const auto range = config.x_range == std::pair<std::int64_t, std::int64_t>{0, 0}
                           ? default_x_range(config.system)
                           : config.x_range;
    const std::int64_t top = std::max<std::int64_t>(range.second, 0);
    return static_cast<std::uint64_t>(top) / config.system.gamma + 1;
}

}  // namespace

std::pair<std::int64_t, std::int64_t> default_x_range(const ModulusSystem& system) {
    const std::size_t lambda = (system.L() - system.K) / 2;
    const std::uint64_t bound =
        safe_value_bound(system.M, system.K, system.n_integers, lambda);
    // one full fold of headroom: an integer observed just past a fold
    // boundary is recovered as q+1, which must still pass the value filter
    const std::int64_t top = static_cast<std::int64_t>((bound - 1) * system.gamma) - 1;
    return {0, std::max<std::int64_t>(top, 0)};
}

ResidueTable undersample_frequencies(const std::vector<std::uint64_t>& freqs,
                                     const std::vector<std::complex<double>>& amps,
                                     const ModulusSystem& system) {
    if (freqs.empty() || freqs.size() != amps.size())
        raise(Errc::InvalidArgument, "need one amplitude per frequency");
    if (freqs.size() > system.n_integers)
        raise(Errc::InvalidArgument, "more tones than unknowns");
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (std::abs(amps[i]) == 0.0) raise(Errc::InvalidArgument, "zero amplitude");
        for (std::size_t j = i + 1; j < freqs.size(); ++j)
            if (freqs[i] == freqs[j]) raise(Errc::InvalidArgument, "duplicate frequency");
    }

    double amp_total = 0.0;
    for (const auto& a : amps) amp_total += std::abs(a);

    ResidueTable table;
    table.sets.resize(system.L());
    for (std::size_t l = 0; l < system.L(); ++l) {
        const std::uint64_t m = system.m[l];
        if (m > (1ULL << 20)) raise(Errc::RangeTooLarge, "transform size beyond the toy front end");
        const std::size_t points = static_cast<std::size_t>(m);

        std::vector<std::complex<double>> samples(points);
        for (std::size_t n = 0; n < points; ++n) {
            std::complex<double> acc = 0.0;
            for (std::size_t i = 0; i < freqs.size(); ++i) {
                const double phase = 2.0 * kPi * static_cast<double>(freqs[i] % m) *
                                     static_cast<double>(n) / static_cast<double>(m);
                acc += amps[i] * std::complex<double>(std::cos(phase), std::sin(phase));
            }
            samples[n] = acc;
        }

        const double threshold = 1e-6 * static_cast<double>(points) * amp_total;
        std::vector<double> peaks;
        for (std::size_t k = 0; k < points; ++k) {
            std::complex<double> bin = 0.0;
            for (std::size_t n = 0; n < points; ++n) {
                const double phase = -2.0 * kPi * static_cast<double>(k) *
                                     static_cast<double>(n) / static_cast<double>(m);
                bin += samples[n] * std::complex<double>(std::cos(phase), std::sin(phase));
            }
            if (std::abs(bin) > threshold) peaks.push_back(static_cast<double>(k));
        }
        if (peaks.size() > system.n_integers)
            raise(Errc::PeakCountMismatch, std::to_string(peaks.size()) + " peaks for " +
                                               std::to_string(system.n_integers) + " unknowns");
        if (peaks.empty()) raise(Errc::PeakCountMismatch, "no spectral peak detected");
        table.sets[l] = std::move(peaks);
    }
    return table;
}

ErrorDraw sample_errors(const SimConfig& config, double sigma, std::uint64_t trial_seed) {
    const std::size_t L = config.system.L();
    const std::size_t N = config.system.n_integers;
    if (!config.noise_scale.empty() && config.noise_scale.size() != L)
        raise(Errc::InvalidArgument, "need one noise scale per set");

    Rng rng(derive_seed(trial_seed, 0x45525253ULL));
    ErrorDraw draw;

    if (config.bad_set_count > 0) {
        if (config.bad_set_count > L) raise(Errc::InvalidArgument, "more bad sets than sets");
        std::vector<std::size_t> all(L);
        std::iota(all.begin(), all.end(), 0);
        for (std::size_t i = 0; i < config.bad_set_count; ++i) {
            const std::size_t pick = static_cast<std::size_t>(rng.uniform_u64(i, L - 1));
            std::swap(all[i], all[pick]);
        }
        draw.bad_sets.assign(all.begin(), all.begin() + config.bad_set_count);
        std::sort(draw.bad_sets.begin(), draw.bad_sets.end());
    }

    draw.delta.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        const bool bad = std::binary_search(draw.bad_sets.begin(), draw.bad_sets.end(), l);
        const double scale = config.noise_scale.empty() ? 1.0 : config.noise_scale[l];
        draw.delta[l].resize(N);
        for (std::size_t i = 0; i < N; ++i)
            draw.delta[l][i] = bad ? rng.uniform01() * static_cast<double>(config.system.m[l])
                                   : rng.normal(sigma * scale);
    }
    return draw;
}

TrialInstance make_trial_instance(const SimConfig& config, double sigma,
                                  std::uint64_t trial_seed) {
    const auto range = config.x_range == std::pair<std::int64_t, std::int64_t>{0, 0}
                           ? default_x_range(config.system)
                           : config.x_range;
    if (range.second < range.first) raise(Errc::InvalidArgument, "empty x range");

    const std::size_t N = config.system.n_integers;
    Rng rng(derive_seed(trial_seed, 0x47454E58ULL));

    TrialInstance inst;
    inst.truth_x.resize(N);
    inst.truth_q.resize(N);
    for (int attempt = 0;; ++attempt) {
        if (attempt > 1000)
            raise(Errc::InvalidArgument, "x range too narrow for distinct folding numbers");
        for (std::size_t i = 0; i < N; ++i) {
            inst.truth_x[i] = rng.uniform_i64(range.first, range.second);
            inst.truth_q[i] =
                static_cast<std::uint64_t>(inst.truth_x[i]) / config.system.gamma;
        }
        std::vector<std::uint64_t> qs = inst.truth_q;
        std::sort(qs.begin(), qs.end());
        if (std::adjacent_find(qs.begin(), qs.end()) == qs.end()) break;
    }

    inst.errors = sample_errors(config, sigma, trial_seed);

    inst.table.sets.resize(config.system.L());
    for (std::size_t l = 0; l < config.system.L(); ++l) {
        inst.table.sets[l].resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            const double noisy =
                static_cast<double>(inst.truth_x[i]) + inst.errors.delta[l][i];
            inst.table.sets[l][i] = common_residue(noisy, config.system.m[l]).value;
        }
        std::sort(inst.table.sets[l].begin(), inst.table.sets[l].end());
    }
    return inst;
}

double success_tolerance(const ModulusSystem& system) {
    return 3.0 * static_cast<double>(system.gamma) / (4.0 * static_cast<double>(system.n_integers));
}

bool within_tolerance(const std::vector<std::int64_t>& estimates,
                      const std::vector<std::int64_t>& truth, double bound) {
    if (estimates.size() != truth.size()) return false;
    std::vector<std::size_t> perm(truth.size());
    std::iota(perm.begin(), perm.end(), 0);

    double best_total = -1.0;
    std::vector<std::size_t> best_perm;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            total += std::fabs(static_cast<double>(estimates[i] - truth[perm[i]]));
        if (best_total < 0.0 || total < best_total) {
            best_total = total;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (std::size_t i = 0; i < best_perm.size(); ++i)
        if (std::fabs(static_cast<double>(estimates[i] - truth[best_perm[i]])) > bound)
            return false;
    return true;
}

bool run_trial(const SimConfig& config, double sigma, std::uint64_t trial_seed) {
    const TrialInstance inst = make_trial_instance(config, sigma, trial_seed);

    ArbitraryOptions opts;
    opts.use_pruning = true;
    opts.use_mle = config.estimator == Estimator::Mle;
    opts.value_bound = effective_value_bound(config);
    if (!config.noise_scale.empty()) {
        opts.variances.reserve(config.noise_scale.size());
        for (const double s : config.noise_scale) opts.variances.push_back(s * s);
    }

    std::vector<std::int64_t> estimates;
    try {
        for (const Reconstruction& rec : reconstruct_arbitrary(inst.table, config.system, opts))
            estimates.push_back(rec.x);
    } catch (const Error&) {
        return false;
    }
    return within_tolerance(estimates, inst.truth_x, success_tolerance(config.system));
}

SimReport snr_sweep(const SimConfig& config) {
    if (config.snr_db.empty()) raise(Errc::InvalidArgument, "empty snr grid");
    if (config.n_trials == 0) raise(Errc::InvalidArgument, "need at least one trial");
    const std::size_t lambda_max = (config.system.L() - config.system.K) / 2;
    if (config.bad_set_count > lambda_max)
        raise(Errc::InvalidArgument, "bad_set_count exceeds floor((L-K)/2)");

    SimReport report;
    report.config = config;

    for (std::size_t point = 0; point < config.snr_db.size(); ++point) {
        const double snr = config.snr_db[point];
        const double sigma = std::pow(10.0, -snr / 20.0);

        std::atomic<std::size_t> successes{0};
        std::atomic<std::size_t> next{0};
        const std::size_t workers = thread_budget(config.n_trials);

        const auto worker = [&]() {
            std::size_t local = 0;
            while (true) {
                const std::size_t trial = next.fetch_add(1);
                if (trial >= config.n_trials) break;
                if (run_trial(config, sigma, derive_seed(config.seed, point, trial))) ++local;
            }
            successes.fetch_add(local);
        };

        if (workers == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }

        SimRow row;
        row.snr_db = snr;
        row.sigma = sigma;
        row.trials = config.n_trials;
        row.successes = successes.load();
        row.success_rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
        report.rows.push_back(row);
    }
    return report;
}

std::string to_csv(const SimReport& report) {
    char buf[256];
    std::string out;

    const auto& cfg = report.config;
    out += "# crt-armor snr sweep\n";
    std::snprintf(buf, sizeof(buf), "# N=%zu delta=%.17g K=%zu", cfg.system.n_integers,
                  cfg.system.delta, cfg.system.K);
    out += buf;
    out += " M=";
    for (std::size_t l = 0; l < cfg.system.M.size(); ++l) {
        if (l) out += ",";
        out += std::to_string(cfg.system.M[l]);
    }
    out += "\n";
    const auto range = cfg.x_range == std::pair<std::int64_t, std::int64_t>{0, 0}
                           ? default_x_range(cfg.system)
                           : cfg.x_range;
    std::snprintf(buf, sizeof(buf),
                  "# trials=%zu bad_sets=%zu seed=%llu estimator=%s x_range=[%lld,%lld]\n",
                  cfg.n_trials, cfg.bad_set_count,
                  static_cast<unsigned long long>(cfg.seed),
                  cfg.estimator == Estimator::Mle ? "mle" : "plain_mean",
                  static_cast<long long>(range.first), static_cast<long long>(range.second));
    out += buf;

    out += "snr_db,sigma,trials,successes,success_rate\n";
    for (const SimRow& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%zu,%zu,%.17g\n", row.snr_db, row.sigma,
                      row.trials, row.successes, row.success_rate);
        out += buf;
    }
    return out;
}

}  // namespace crtarmor
