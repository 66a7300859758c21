#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "crtarmor/errors.hpp"

namespace crtarmor {

// Unordered residue sets of N integers, one set per surviving modulus.
// A set may hold fewer values than N (two integers can share a residue) and
// callers may pass raw per-slot values with duplicates; matching is by value.
struct QuotientTable {
    std::vector<std::vector<std::uint64_t>> sets;
    std::vector<std::uint64_t> moduli;   // ascending, pairwise coprime
    std::vector<std::size_t> labels;     // original set indices, kept across deletions
};

struct IntegerMatch {
    std::uint64_t value = 0;
    // matched[j]: residue of `value` found in set j, or nullopt when set j
    // disagrees; indices follow the table's set order.
    std::vector<std::optional<std::uint64_t>> matched;
    std::size_t agreement = 0;
};

struct MultiSolution {
    std::vector<IntegerMatch> integers;  // ascending by value
    std::size_t explained = 0;           // sets reproduced exactly by the solution
    bool unique = false;                 // exactly one maximal solution existed
};

struct MultiCrtOptions {
    // Exclusive upper bound on reconstructed integers; 0 means the product of
    // the K smallest table moduli.
    std::uint64_t value_bound = 0;
    // Cap on subset * assignment enumeration work.
    std::uint64_t enumeration_guard = 100'000'000ULL;
};

// Error-free joint recovery: the unique N-multiset consistent with every set.
// unique=false when several maximal solutions fit (the caller decides what
// ambiguity means); NoSolution when nothing is consistent.
MultiSolution multi_crt_exact(const QuotientTable& table, std::size_t K, std::size_t N,
                              const MultiCrtOptions& opts = {});

// Joint recovery tolerating up to `lambda` sets that carry no valid residue of
// some integer. Candidates come from CRT over every K-subset and every
// residue choice; a candidate survives when at least (set count - lambda)
// sets contain its residue; solutions are N-multisets of survivors explaining
// all but at most lambda sets exactly, ranked by sets explained.
MultiSolution multi_crt_robust(const QuotientTable& table, std::size_t K, std::size_t N,
                               std::size_t lambda, const MultiCrtOptions& opts = {});

// Exhaustive reference: every maximal valid N-multiset over the full value
// range, canonically ordered. Test oracle; guard on the enumeration size.
std::vector<std::vector<std::uint64_t>> multi_crt_oracle(const QuotientTable& table, std::size_t K,
                                                         std::size_t N, std::size_t lambda,
                                                         const MultiCrtOptions& opts = {});

// Conservative dynamic-range bound for unique N-integer recovery with up to
// `lambda` wholly-wrong sets. Below this bound no cross-assembled rival
// (a value agreeing with one true integer on part of the moduli and another
// on the rest) can pass the agreement filters, so every valid solution is the
// true one. Computed by minimising the largest part product over partitions
// of small modulus subsets into at most N blocks.
std::uint64_t safe_value_bound(const std::vector<std::uint64_t>& M, std::size_t K, std::size_t N,
                               std::size_t lambda);

}  // namespace crtarmor
