#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "crtarmor/errors.hpp"

namespace crtarmor {

// Codeword of the single-integer remainder code: entry l is <X>_{M_l}.
// Decoders tolerate corrupted entries of any magnitude (a corrupted channel
// may deliver values at or above its modulus); encode always produces
// reduced entries.
struct ResidueVector {
    std::vector<std::uint64_t> entries;
    std::vector<std::uint64_t> moduli;

    std::size_t length() const { return entries.size(); }
};

struct DecodeCandidate {
    std::uint64_t value = 0;
    std::size_t agreement = 0;  // coordinates where re-encoding matches the input
};

struct DecodeResult {
    std::vector<DecodeCandidate> candidates;  // agreement desc, value asc
    bool unique = false;
};

// Residue vector of X over the full modulus list. X must lie below the
// product of all moduli.
ResidueVector encode(std::uint64_t value, const std::vector<std::uint64_t>& M);

// Recovers X in [0, prod_{l<K} M_l) when at most floor((L-K)/2) coordinates
// are corrupted. DecodeFailure when nothing reaches the agreement threshold;
// Ambiguous when several candidates do (impossible under the error bound).
std::uint64_t unique_decode(const ResidueVector& v, std::size_t K);

// Every codeword value agreeing with v on at least L - lambda coordinates.
// Requires lambda <= L - K. The decoder enumerates all K-coordinate subsets,
// reconstructs a candidate from each, and scores agreement: any value with
// agreement >= K appears among the reconstructions, so the list is complete.
DecodeResult list_decode(const ResidueVector& v, std::size_t K, std::size_t lambda);

// Exhaustive reference decoder: all codeword values at minimal Hamming
// distance from v, with that distance. Guard: range must not exceed 10^7.
std::vector<std::pair<std::uint64_t, std::size_t>> oracle_decode(const ResidueVector& v,
                                                                 std::size_t K);

}  // namespace crtarmor
