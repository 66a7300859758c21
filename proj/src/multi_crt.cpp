#include "crtarmor/multi_crt.hpp"

#include <algorithm>
#include <string>

#include "crtarmor/modular.hpp"

namespace crtarmor {

namespace {

using u128 = unsigned __int128;

struct NormalizedTable {
    std::vector<std::vector<std::uint64_t>> sets;  // sorted, deduplicated
    std::vector<std::uint64_t> moduli;
};

NormalizedTable normalize(const QuotientTable& table, std::size_t K) {
    if (table.sets.size() != table.moduli.size())
        raise(Errc::InvalidArgument, "set/modulus count mismatch");
    if (!table.labels.empty() && table.labels.size() != table.sets.size())
        raise(Errc::InvalidArgument, "label count mismatch");
    if (table.sets.empty()) raise(Errc::EmptyInput, "no residue sets");
    if (K == 0 || K > table.sets.size())
        raise(Errc::NoSolution, "fewer surviving sets than information moduli");

    NormalizedTable out;
    out.moduli = table.moduli;
    out.sets.reserve(table.sets.size());
    for (std::size_t j = 0; j < table.sets.size(); ++j) {
        if (table.sets[j].empty()) raise(Errc::InvalidArgument, "empty residue set");
        std::vector<std::uint64_t> s = table.sets[j];
        for (const std::uint64_t r : s)
            if (r >= table.moduli[j]) raise(Errc::InvalidArgument, "residue at or above its modulus");
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        out.sets.push_back(std::move(s));
    }
    return out;
}

std::uint64_t default_bound(const std::vector<std::uint64_t>& moduli, std::size_t K) {
    std::vector<std::uint64_t> sorted = moduli;
    std::sort(sorted.begin(), sorted.end());
    u128 range = 1;
    for (std::size_t l = 0; l < K; ++l) {
        range *= sorted[l];
        if (range > UINT64_MAX) raise(Errc::Overflow, "value range exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(range);
}

// Distinct candidate integers reachable by CRT over any K sets and any
// residue pick. Any value whose residue appears in at least K sets is
// generated, because the product of any K moduli covers the bound.
std::vector<std::uint64_t> generate_candidates(const NormalizedTable& t, std::size_t K,
                                               std::uint64_t bound, std::uint64_t guard) {
    const std::size_t L = t.sets.size();

    std::vector<std::size_t> pick(K);
    for (std::size_t i = 0; i < K; ++i) pick[i] = i;

    u128 work = 0;
    std::vector<std::uint64_t> values;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> residues(K);
    std::vector<std::size_t> choice(K);

    while (true) {
        u128 combos = 1;
        for (std::size_t i = 0; i < K; ++i) combos *= t.sets[pick[i]].size();
        work += combos;
        if (work > guard)
            raise(Errc::CombinatorialBlowup, "candidate enumeration exceeds the configured guard");

        std::fill(choice.begin(), choice.end(), 0);
        while (true) {
            for (std::size_t i = 0; i < K; ++i)
                residues[i] = {t.sets[pick[i]][choice[i]], t.moduli[pick[i]]};
            const std::uint64_t candidate = crt_reconstruct(residues);
            if (candidate < bound) values.push_back(candidate);

            std::size_t i = 0;
            while (i < K && ++choice[i] == t.sets[pick[i]].size()) choice[i++] = 0;
            if (i == K) break;
        }

        std::size_t i = K;
        while (i > 0 && pick[i - 1] == L - K + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < K; ++j) pick[j] = pick[j - 1] + 1;
    }

    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::size_t agreement_of(std::uint64_t value, const NormalizedTable& t) {
    std::size_t agreement = 0;
    for (std::size_t j = 0; j < t.sets.size(); ++j)
        if (std::binary_search(t.sets[j].begin(), t.sets[j].end(), value % t.moduli[j])) ++agreement;
    return agreement;
}

std::size_t explained_sets(const std::vector<std::uint64_t>& solution, const NormalizedTable& t) {
    std::size_t explained = 0;
    std::vector<std::uint64_t> residues;
    for (std::size_t j = 0; j < t.sets.size(); ++j) {
        residues.clear();
        for (const std::uint64_t q : solution) residues.push_back(q % t.moduli[j]);
        std::sort(residues.begin(), residues.end());
        residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
        if (residues == t.sets[j]) ++explained;
    }
    return explained;
}

// All maximal valid N-multisets assembled from `pool`, ascending, given the
// per-solution validity threshold.
std::vector<std::vector<std::uint64_t>> assemble_solutions(const std::vector<std::uint64_t>& pool,
                                                           const NormalizedTable& t, std::size_t N,
                                                           std::size_t threshold,
                                                           std::uint64_t guard) {
    std::vector<std::vector<std::uint64_t>> best;
    std::size_t best_explained = 0;
    if (pool.empty()) return best;

    u128 count = 1;  // C(|pool| + N - 1, N)
    for (std::size_t i = 1; i <= N; ++i) count = count * (pool.size() + N - i) / i;
    if (count > guard)
        raise(Errc::CombinatorialBlowup, "solution enumeration exceeds the configured guard");

    std::vector<std::size_t> idx(N, 0);  // non-decreasing index tuples
    std::vector<std::uint64_t> solution(N);
    while (true) {
        for (std::size_t i = 0; i < N; ++i) solution[i] = pool[idx[i]];
        const std::size_t explained = explained_sets(solution, t);
        if (explained >= threshold && explained >= best_explained) {
            if (explained > best_explained) {
                best_explained = explained;
                best.clear();
            }
            best.push_back(solution);
        }

        std::size_t i = N;
        while (i > 0) {
            --i;
            if (idx[i] + 1 < pool.size()) {
                ++idx[i];
                for (std::size_t j = i + 1; j < N; ++j) idx[j] = idx[i];
                break;
            }
            if (i == 0) return best;
        }
    }
}

MultiSolution pack_solution(const std::vector<std::uint64_t>& values, std::size_t explained,
                            bool unique, const NormalizedTable& t) {
    MultiSolution out;
    out.explained = explained;
    out.unique = unique;
    out.integers.reserve(values.size());
    for (const std::uint64_t q : values) {
        IntegerMatch match;
        match.value = q;
        match.matched.resize(t.sets.size());
        for (std::size_t j = 0; j < t.sets.size(); ++j) {
            const std::uint64_t r = q % t.moduli[j];
            if (std::binary_search(t.sets[j].begin(), t.sets[j].end(), r)) {
                match.matched[j] = r;
                ++match.agreement;
            }
        }
        out.integers.push_back(std::move(match));
    }
    return out;
}

}  // namespace

MultiSolution multi_crt_robust(const QuotientTable& table, std::size_t K, std::size_t N,
                               std::size_t lambda, const MultiCrtOptions& opts) {
    if (N == 0) raise(Errc::InvalidArgument, "need at least one integer");
    const NormalizedTable t = normalize(table, K);
    const std::uint64_t bound = opts.value_bound ? opts.value_bound : default_bound(t.moduli, K);
    const std::size_t threshold = t.sets.size() > lambda ? t.sets.size() - lambda : 0;

    std::vector<std::uint64_t> pool;
    for (const std::uint64_t c : generate_candidates(t, K, bound, opts.enumeration_guard))
        if (agreement_of(c, t) >= threshold) pool.push_back(c);

    const auto maximal = assemble_solutions(pool, t, N, threshold, opts.enumeration_guard);
    if (maximal.empty())
        raise(Errc::NoSolution, "no integer multiset explains enough residue sets");
    return pack_solution(maximal.front(), explained_sets(maximal.front(), t), maximal.size() == 1,
                         t);
}

MultiSolution multi_crt_exact(const QuotientTable& table, std::size_t K, std::size_t N,
                              const MultiCrtOptions& opts) {
    return multi_crt_robust(table, K, N, 0, opts);
}

std::vector<std::vector<std::uint64_t>> multi_crt_oracle(const QuotientTable& table, std::size_t K,
                                                         std::size_t N, std::size_t lambda,
                                                         const MultiCrtOptions& opts) {
    const NormalizedTable t = normalize(table, K);
    const std::uint64_t bound = opts.value_bound ? opts.value_bound : default_bound(t.moduli, K);
    const std::size_t threshold = t.sets.size() > lambda ? t.sets.size() - lambda : 0;

    u128 count = 1;  // C(bound + N - 1, N)
    for (std::size_t i = 1; i <= N; ++i) count = count * (bound + N - i) / i;
    if (count > 10'000'000ULL)
        raise(Errc::RangeTooLarge, "exhaustive enumeration of " + std::to_string(bound) +
                                       "^" + std::to_string(N) + " values is too large");

    std::vector<std::uint64_t> pool(bound);
    for (std::uint64_t q = 0; q < bound; ++q) pool[q] = q;
    return assemble_solutions(pool, t, N, threshold, UINT64_MAX);
}

std::uint64_t safe_value_bound(const std::vector<std::uint64_t>& M, std::size_t K, std::size_t N,
                               std::size_t lambda) {
    if (M.empty() || K == 0 || K > M.size() || N == 0)
        raise(Errc::InvalidArgument, "bad modulus geometry");
    const std::size_t L = M.size();

    std::uint64_t bound = 1;
    for (std::size_t l = 0; l < K; ++l) bound *= M[l];
    if (N == 1 && lambda == 0) return bound;

    // Smallest set of trustworthy moduli a rival assembly could be built on:
    // with lambda wholly-wrong sets, a tying rival needs L - 2*lambda honest
    // coordinates and a strictly better one needs L - 3*lambda + 1.
    std::size_t subset_size;
    if (lambda == 0) {
        subset_size = L;
    } else {
        const std::size_t tie = L > 2 * lambda ? L - 2 * lambda : 1;
        const std::size_t beat = L + 1 > 3 * lambda ? L + 1 - 3 * lambda : 1;
        subset_size = std::min(tie, beat);
    }
    if (subset_size < 1) subset_size = 1;
    if (subset_size > L) subset_size = L;

    std::vector<std::size_t> pick(subset_size);
    for (std::size_t i = 0; i < subset_size; ++i) pick[i] = i;

    while (true) {
        // minimise, over partitions of the subset into at most N blocks, the
        // largest block product
        std::vector<u128> parts(std::min<std::size_t>(N, subset_size), 1);
        std::uint64_t best_max = UINT64_MAX;
        auto recurse = [&](auto&& self, std::size_t item) -> void {
            if (item == subset_size) {
                u128 largest = 0;
                for (const u128 p : parts) largest = std::max(largest, p);
                if (largest < best_max) best_max = static_cast<std::uint64_t>(largest);
                return;
            }
            for (std::size_t b = 0; b < parts.size(); ++b) {
                const u128 saved = parts[b];
                parts[b] = saved * M[pick[item]];
                if (parts[b] < best_max) self(self, item + 1);
                parts[b] = saved;
                if (saved == 1) break;  // empty blocks are interchangeable
            }
        };
        recurse(recurse, 0);
        bound = std::min(bound, best_max);

        std::size_t i = subset_size;
        while (i > 0 && pick[i - 1] == L - subset_size + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < subset_size; ++j) pick[j] = pick[j - 1] + 1;
    }
    return bound;
}

}  // namespace crtarmor
