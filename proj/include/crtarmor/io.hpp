#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crtarmor/mle_residue.hpp"
#include "crtarmor/modular.hpp"
#include "crtarmor/sim.hpp"

namespace crtarmor {

// Parsed problem document: keys N, delta, M, K, residue_sets, optional
// variances. Unknown keys produce warnings, not errors.
struct ProblemFile {
    ModulusSystem system;
    ResidueTable table;
    std::optional<NoiseModel> noise;
    std::vector<std::string> warnings;
};

ProblemFile parse_problem(const std::string& json_text);
ProblemFile load_problem(const std::string& path);

struct ParsedSimConfig {
    SimConfig config;
    std::vector<std::string> warnings;
};

// Keys: N, delta, M, K, n_trials, snr_db, seed; optional bad_set_count,
// noise_scale, x_range, estimator ("plain_mean" | "mle").
ParsedSimConfig parse_sim_config(const std::string& json_text);
ParsedSimConfig load_sim_config(const std::string& path);

}  // namespace crtarmor
