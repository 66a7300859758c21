#pragma once

#include <cstdint>
#include <vector>

#include "crtarmor/modular.hpp"
#include "crtarmor/reconstruct_bounded.hpp"
#include "crtarmor/reconstruction.hpp"

namespace crtarmor {

// Classification of every sorted common residue for cut selection. For entry
// j, interval_labels[j] holds the labels of residues strictly inside the arc
// (gamma_j, gamma_j + 2*delta] on the circle. cut_candidates are the sparse
// entries (few neighbours, own label absent) where cutting is safe;
// dense entries mark the head clusters of the unknown integers.
struct CutPlan {
    CommonResidueList commons;
    std::vector<std::vector<std::size_t>> interval_labels;  // sorted unique labels per entry
    std::vector<std::size_t> cut_candidates;                // sparse entries, ascending
    std::vector<std::size_t> dense;                         // dense entries, ascending
    std::vector<std::vector<std::size_t>> dense_runs;       // dense split into circular runs,
                                                            // each in chain order
};

CutPlan build_cut_plan(const ResidueTable& table, const ModulusSystem& system);

// At most one cut per dense run: the sparse entry nearest counterclockwise
// before the run's first element. Falls back to the smallest sparse entry
// when no dense run exists. EmptyScriptN when there is no sparse entry at
// all, which signals more wholly-wrong sets than the geometry tolerates.
std::vector<std::size_t> pruned_cuts(const CutPlan& plan);

struct ArbitraryOptions {
    bool use_pruning = true;
    bool use_mle = true;                 // trimmed weighted mean vs plain mean
    std::uint64_t value_bound = 0;       // 0: product of the first K coprime parts
    std::vector<double> variances = {};  // per-set noise variances; empty = uniform
    std::uint64_t enumeration_guard = 100'000'000ULL;
};

// Reconstruction tolerating up to floor((L-K)/2) residue sets with arbitrary
// errors. Tries cuts in ascending order (the pruned ones first when pruning
// is on, then the remaining candidates, since at the tolerance boundary the
// dense-run shortcut alone can miss the one cut that separates the clusters);
// the first cut whose joint recovery is unique wins. AmbiguousReconstruction
// when no cut yields a unique solution.
std::vector<Reconstruction> reconstruct_arbitrary(const ResidueTable& table,
                                                  const ModulusSystem& system,
                                                  const ArbitraryOptions& opts = {});

}  // namespace crtarmor
