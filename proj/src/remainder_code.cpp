#include "crtarmor/remainder_code.hpp"

#include <algorithm>
#include <string>

#include "crtarmor/modular.hpp"

namespace crtarmor {

namespace {

using u128 = unsigned __int128;

void check_moduli(const ResidueVector& v, std::size_t K) {
    if (v.entries.size() != v.moduli.size())
        raise(Errc::InvalidArgument, "entry/modulus length mismatch");
    if (v.moduli.empty()) raise(Errc::EmptyInput, "empty residue vector");
    if (K == 0 || K > v.moduli.size()) raise(Errc::InvalidArgument, "K out of range");
    for (std::size_t l = 1; l < v.moduli.size(); ++l)
        if (v.moduli[l] <= v.moduli[l - 1]) raise(Errc::NotAscending, "moduli not ascending");
}

std::uint64_t range_product(const std::vector<std::uint64_t>& M, std::size_t K) {
    u128 range = 1;
    for (std::size_t l = 0; l < K; ++l) {
        range *= M[l];
        if (range > UINT64_MAX) raise(Errc::Overflow, "codeword range exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(range);
}

std::size_t score_agreement(std::uint64_t value, const ResidueVector& v) {
    std::size_t agreement = 0;
    for (std::size_t l = 0; l < v.length(); ++l)
        if (value % v.moduli[l] == v.entries[l]) ++agreement;
    return agreement;
}

// All distinct codeword values obtainable by CRT over some K coordinates,
// with their agreement counts. Complete for any value sharing >= K
// coordinates with v, because the product of any K moduli covers the range.
std::vector<DecodeCandidate> gather_candidates(const ResidueVector& v, std::size_t K) {
    const std::size_t L = v.length();
    const std::uint64_t range = range_product(v.moduli, K);

    std::vector<std::size_t> pick(K);
    for (std::size_t i = 0; i < K; ++i) pick[i] = i;

    std::vector<std::uint64_t> values;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> residues(K);
    while (true) {
        for (std::size_t i = 0; i < K; ++i)
            residues[i] = {v.entries[pick[i]] % v.moduli[pick[i]], v.moduli[pick[i]]};
        const std::uint64_t candidate = crt_reconstruct(residues);
        if (candidate < range) values.push_back(candidate);

        // next K-combination of {0..L-1}
        std::size_t i = K;
        while (i > 0 && pick[i - 1] == L - K + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < K; ++j) pick[j] = pick[j - 1] + 1;
    }

    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<DecodeCandidate> out;
    out.reserve(values.size());
    for (const std::uint64_t value : values) out.push_back({value, score_agreement(value, v)});
    return out;
}

}  // namespace

ResidueVector encode(std::uint64_t value, const std::vector<std::uint64_t>& M) {
    if (M.empty()) raise(Errc::EmptyInput, "empty modulus list");
    u128 full = 1;
    for (const std::uint64_t modulus : M) {
        full *= modulus;
        if (full > UINT64_MAX) {
            full = static_cast<u128>(UINT64_MAX) + 1;
            break;
        }
    }
    if (static_cast<u128>(value) >= full)
        raise(Errc::OutOfRange, std::to_string(value) + " exceeds the modulus product");

    ResidueVector v;
    v.moduli = M;
    v.entries.reserve(M.size());
    for (const std::uint64_t modulus : M) v.entries.push_back(value % modulus);
    return v;
}

std::uint64_t unique_decode(const ResidueVector& v, std::size_t K) {
    check_moduli(v, K);
    const std::size_t lambda = (v.length() - K) / 2;
    const std::size_t threshold = v.length() - lambda;

    std::vector<DecodeCandidate> hits;
    for (const DecodeCandidate& c : gather_candidates(v, K))
        if (c.agreement >= threshold) hits.push_back(c);

    if (hits.empty()) raise(Errc::DecodeFailure, "no candidate within the unique-decoding radius");
    if (hits.size() > 1)
        raise(Errc::Ambiguous, std::to_string(hits.size()) + " candidates at the unique radius");
    return hits.front().value;
}

DecodeResult list_decode(const ResidueVector& v, std::size_t K, std::size_t lambda) {
    check_moduli(v, K);
    if (lambda > v.length() - K)
        raise(Errc::LambdaTooLarge, "lambda " + std::to_string(lambda) + " exceeds L - K = " +
                                        std::to_string(v.length() - K));
    const std::size_t threshold = v.length() - lambda;

    DecodeResult result;
    for (const DecodeCandidate& c : gather_candidates(v, K))
        if (c.agreement >= threshold) result.candidates.push_back(c);

    std::sort(result.candidates.begin(), result.candidates.end(),
              [](const DecodeCandidate& a, const DecodeCandidate& b) {
                  if (a.agreement != b.agreement) return a.agreement > b.agreement;
                  return a.value < b.value;
              });
    result.unique = result.candidates.size() == 1;
    return result;
}

std::vector<std::pair<std::uint64_t, std::size_t>> oracle_decode(const ResidueVector& v,
                                                                 std::size_t K) {
    check_moduli(v, K);
    const std::uint64_t range = range_product(v.moduli, K);
    if (range > 10'000'000ULL)
        raise(Errc::RangeTooLarge, "range " + std::to_string(range) + " too large to enumerate");

    const std::size_t L = v.length();
    std::size_t best = L + 1;
    std::vector<std::pair<std::uint64_t, std::size_t>> out;
    for (std::uint64_t x = 0; x < range; ++x) {
        std::size_t dist = 0;
        for (std::size_t l = 0; l < L; ++l)
            if (x % v.moduli[l] != v.entries[l]) ++dist;
        if (dist < best) {
            best = dist;
            out.clear();
        }
        if (dist == best) out.emplace_back(x, dist);
    }
    return out;
}

}  // namespace crtarmor
