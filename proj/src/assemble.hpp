#pragma once

// Internal helper shared by the bounded and arbitrary reconstruction
// pipelines: turn a jointly recovered integer into a Reconstruction with
// correspondence, residue estimate, and final value.

#include <cmath>
#include <cstdint>
#include <vector>

#include "crtarmor/errors.hpp"
#include "crtarmor/mle_residue.hpp"
#include "crtarmor/multi_crt.hpp"
#include "crtarmor/reconstruction.hpp"

namespace crtarmor::detail {

struct AssemblyView {
    const std::vector<std::vector<std::uint64_t>>* slot_q;  // [set][slot], raw per-slot values
    const std::vector<std::vector<double>>* slot_hat;       // [set][slot], unwrapped residues
    const std::vector<std::size_t>* labels;                 // original label per set
    const std::vector<std::uint64_t>* moduli;               // coprime part per set
};

inline std::int64_t compose_value(std::uint64_t gamma, std::uint64_t folding, double estimate) {
    const __int128 base = static_cast<__int128>(gamma) * static_cast<__int128>(folding);
    const __int128 x = base + std::llround(estimate);
    if (x > INT64_MAX || x < INT64_MIN) raise(Errc::Overflow, "estimate exceeds 64 bits");
    return static_cast<std::int64_t>(x);
}

// use_trimming selects the outlier-trimmed weighted mean; otherwise the plain
// mean of every matching hat is used. Sets where several slots carry the
// integer's folding residue contribute all their hats to the trimmed path but
// are skipped by the plain bounded mean (they cannot be told apart without
// the trim step).
inline Reconstruction assemble_one(const IntegerMatch& match, const AssemblyView& view,
                                   std::uint64_t gamma, double delta, std::size_t K,
                                   bool use_trimming, bool plain_skips_ambiguous,
                                   const NoiseModel& noise) {
    Reconstruction rec;
    rec.folding = match.value;
    rec.unique = true;

    std::vector<std::pair<std::size_t, double>> hat_pool;
    std::vector<std::pair<std::size_t, double>> unambiguous;

    const std::size_t set_count = view.slot_q->size();
    for (std::size_t j = 0; j < set_count; ++j) {
        CorrespondenceEntry entry;
        entry.label = (*view.labels)[j];
        entry.residue = match.value % (*view.moduli)[j];

        const auto& q_row = (*view.slot_q)[j];
        const auto& hat_row = (*view.slot_hat)[j];
        for (std::size_t s = 0; s < q_row.size(); ++s) {
            if (q_row[s] != entry.residue) continue;
            entry.matched = true;
            entry.hats.push_back(hat_row[s]);
        }
        entry.ambiguous = entry.hats.size() > 1;
        if (entry.matched) {
            for (const double hat : entry.hats) hat_pool.emplace_back(entry.label, hat);
            if (!entry.ambiguous) unambiguous.emplace_back(entry.label, entry.hats.front());
        }
        rec.correspondence.push_back(std::move(entry));
    }

    if (hat_pool.empty()) raise(Errc::NoSolution, "recovered integer matches no residue set");

    if (use_trimming) {
        const TrimmedSet trimmed = trim_outliers(hat_pool, delta, K);
        rec.residue_estimate = mle_closed_form(trimmed, noise);
        rec.trimmed_labels = trimmed.labels;
        rec.trimmed_values = trimmed.values;
    } else {
        const auto& pool =
            (plain_skips_ambiguous && !unambiguous.empty()) ? unambiguous : hat_pool;
        double sum = 0.0;
        for (const auto& [label, hat] : pool) {
            sum += hat;
            rec.trimmed_labels.push_back(label);
            rec.trimmed_values.push_back(hat);
        }
        rec.residue_estimate = sum / static_cast<double>(pool.size());
    }

    rec.x = compose_value(gamma, rec.folding, rec.residue_estimate);
    return rec;
}

}  // namespace crtarmor::detail
