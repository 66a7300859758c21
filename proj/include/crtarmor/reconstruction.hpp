#pragma once

#include <cstdint>
#include <vector>

namespace crtarmor {

// How one reconstructed integer relates to one surviving residue set.
struct CorrespondenceEntry {
    std::size_t label = 0;        // original set index
    bool matched = false;         // set contains the integer's folding residue
    std::uint64_t residue = 0;    // that folding residue, when matched
    std::vector<double> hats;     // unwrapped common residues of the matching slots
    bool ambiguous = false;       // several slots carried the same folding residue
};

struct Reconstruction {
    std::int64_t x = 0;                    // estimate of the unknown integer
    std::uint64_t folding = 0;             // recovered folding number
    double residue_estimate = 0.0;         // common-residue estimate in [-gamma, gamma)
    std::vector<CorrespondenceEntry> correspondence;
    std::vector<std::size_t> trimmed_labels;  // labels whose hats survived trimming
    std::vector<double> trimmed_values;       // the surviving hats themselves
    std::size_t cut_index = 0;             // position of the cut in the sorted common residues
    double cut_gamma = 0.0;                // value the circle was cut at
    bool cut_wrap = false;                 // cut fell on the wrap-around gap
    bool unique = true;                    // joint recovery had a single maximal solution
};

}  // namespace crtarmor
