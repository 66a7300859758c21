#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "crtarmor/errors.hpp"

namespace crtarmor {

// Global problem geometry: N unknown integers observed modulo L full moduli
// m_l = gamma * M_l, where the M_l are pairwise coprime and gamma = 4 * N * delta
// ties the shared factor to the residue error bound delta.
struct ModulusSystem {
    std::size_t n_integers = 1;            // N
    double delta = 0.0;                    // per-residue error bound
    std::uint64_t gamma = 0;               // shared factor, 4 * N * delta
    std::vector<std::uint64_t> M;          // coprime parts, strictly ascending
    std::size_t K = 0;                     // information moduli count
    std::vector<std::uint64_t> m;          // full moduli gamma * M_l

    std::size_t L() const { return M.size(); }

    // Product of the first K coprime parts: the folding-number range that a
    // single integer can occupy for unique recovery.
    std::uint64_t coprime_range() const;
};

// Input to the reconstruction pipelines: per set l, up to N real-valued
// residues in [0, m_l). Which residue belongs to which integer is unknown.
struct ResidueTable {
    std::vector<std::vector<double>> sets;

    std::size_t set_count() const { return sets.size(); }
};

// A real value reduced onto the circle of a given integer circumference.
struct WrappedValue {
    double value = 0.0;       // in [0, modulus)
    std::uint64_t modulus = 0;
};

// Validates the geometry: M non-empty, entries >= 2, strictly ascending,
// pairwise coprime, 1 <= K <= L, and 4*N*delta an integer.
ModulusSystem validate_system(std::size_t n_integers, double delta,
                              std::vector<std::uint64_t> M, std::size_t K);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// Unique X in [0, prod of moduli) matching every (value, modulus) pair.
// Iterative pairwise merge via the extended Euclidean algorithm.
std::uint64_t crt_reconstruct(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& residues);

// <r>_gamma in [0, gamma).
WrappedValue common_residue(double r, std::uint64_t gamma);

// Minimal distance between x and y on the circle modulo gamma; in [0, gamma/2].
double circle_distance(double x, double y, std::uint64_t gamma);

}  // namespace crtarmor
