#pragma once

#include <cstdint>
#include <vector>

#include "crtarmor/modular.hpp"
#include "crtarmor/multi_crt.hpp"
#include "crtarmor/reconstruction.hpp"

namespace crtarmor {

// One residue wrapped onto the circle modulo gamma, remembering where it
// came from.
struct CommonResidue {
    double gamma = 0.0;     // value in [0, gamma)
    std::size_t label = 0;  // set index
    std::size_t slot = 0;   // position within the set
};

// All common residues in ascending order, ties broken by (label, slot);
// exact duplicates within one set collapse to a single entry.
struct CommonResidueList {
    std::vector<CommonResidue> entries;
    std::uint64_t gamma = 0;  // circle modulus the entries live on

    std::size_t size() const { return entries.size(); }
};

// Where to cut the circle open so the residues order correctly on a line.
struct GapCut {
    std::size_t position = 0;  // index of the entry on the low side of the gap
    bool wrap = false;         // gap sits between the last and first entries
    double gamma = 0.0;        // value of that entry
};

struct UnwrappedEntry {
    double hat = 0.0;   // common residue shifted onto the line, in (-gamma, gamma)
    double full = 0.0;  // originating full residue
};

// Mirrors the residue table's shape: rows[label][slot].
struct UnwrappedTable {
    std::vector<std::vector<UnwrappedEntry>> rows;
};

CommonResidueList sorted_common_residues(const ResidueTable& table, const ModulusSystem& system);

// Smallest index whose clockwise gap to the next entry exceeds 2*delta, or
// the wrap-around gap; such a gap always exists when every residue error is
// below delta. NoGap signals the error bound was violated.
GapCut find_gap(const CommonResidueList& commons, const ModulusSystem& system);

// Cut the circle at the gap: entries above the cut value drop by gamma, so
// the hats order like the true noisy common residues on the line.
UnwrappedTable unwrap_residues(const ResidueTable& table, const CommonResidueList& commons,
                               const GapCut& cut);

// Folding-number residues <(full - hat)/gamma>_{M_l}; the difference must be
// an integer multiple of gamma to within 1e-9.
QuotientTable quotient_residues(const ResidueTable& table, const UnwrappedTable& unwrapped,
                                const ModulusSystem& system);

struct BoundedOptions {
    std::uint64_t value_bound = 0;  // 0: product of the first K coprime parts
};

// Full pipeline for residue errors all below delta: wrap, cut, unwrap,
// recover folding numbers jointly, then estimate each common residue by the
// mean of the matched hats. Estimates land within delta of the truth.
std::vector<Reconstruction> reconstruct_bounded(const ResidueTable& table,
                                                const ModulusSystem& system,
                                                const BoundedOptions& opts = {});

}  // namespace crtarmor
