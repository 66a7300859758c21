#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "crtarmor/modular.hpp"

namespace crtarmor {

enum class Estimator { PlainMean, Mle };

struct SimConfig {
    ModulusSystem system;
    std::size_t n_trials = 1000;
    std::vector<double> snr_db;             // one sweep point per entry
    std::size_t bad_set_count = 0;          // adversarial sets per trial; 0 = pure Gaussian
    std::vector<double> noise_scale;        // per-set sigma multipliers; empty = uniform
    std::uint64_t seed = 1;
    std::pair<std::int64_t, std::int64_t> x_range = {0, 0};  // inclusive; {0,0} = default
    Estimator estimator = Estimator::Mle;
};

// Widest ground-truth range under which joint recovery of N integers is
// provably unique at the tolerated number of wholly-wrong sets, with margin
// so noise never folds an integer past the range end.
std::pair<std::int64_t, std::int64_t> default_x_range(const ModulusSystem& system);

struct SimRow {
    double snr_db = 0.0;
    double sigma = 0.0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
};

struct SimReport {
    SimConfig config;
    std::vector<SimRow> rows;
};

// Toy undersampling front end: for each full modulus m_l, takes the m_l-point
// discrete Fourier transform of one period of sum_i A_i e^(2 pi j f_i n / m_l)
// and reads the peak bins as the residue set. Peaks landing on the same bin
// merge. PeakCountMismatch when more than N peaks show up.
ResidueTable undersample_frequencies(const std::vector<std::uint64_t>& freqs,
                                     const std::vector<std::complex<double>>& amps,
                                     const ModulusSystem& system);

struct ErrorDraw {
    std::vector<std::vector<double>> delta;  // [set][integer]
    std::vector<std::size_t> bad_sets;       // sets drawn from the uniform model
};

// i.i.d. Gaussian errors with per-set scaling; bad sets instead get errors
// uniform over [0, m_l). Reproducible from the trial seed alone.
ErrorDraw sample_errors(const SimConfig& config, double sigma, std::uint64_t trial_seed);

struct TrialInstance {
    ResidueTable table;
    std::vector<std::int64_t> truth_x;
    std::vector<std::uint64_t> truth_q;
    ErrorDraw errors;
};

// Ground truth plus the residue table a trial observes: X_i uniform over the
// x range with distinct folding numbers, residues wrapped into [0, m_l).
TrialInstance make_trial_instance(const SimConfig& config, double sigma, std::uint64_t trial_seed);

double success_tolerance(const ModulusSystem& system);  // 3 * gamma / (4 N)

// Matches estimates to ground truth by minimal total deviation, then checks
// every pair against the bound (inclusive).
bool within_tolerance(const std::vector<std::int64_t>& estimates,
                      const std::vector<std::int64_t>& truth, double bound);

// One reconstruction attempt; reconstruction errors count as failure.
bool run_trial(const SimConfig& config, double sigma, std::uint64_t trial_seed);

// sigma = 10^(-snr/20) per sweep point; trial seeds derive from the master
// seed and the (point, trial) indices, so scheduling never changes results.
SimReport snr_sweep(const SimConfig& config);

// Header `snr_db,sigma,trials,successes,success_rate`, one row per sweep
// point, `#` metadata lines echoing the configuration.
std::string to_csv(const SimReport& report);

}  // namespace crtarmor
