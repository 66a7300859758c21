#include "crtarmor/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "crtarmor/multi_crt.hpp"
#include "crtarmor/reconstruct_arbitrary.hpp"
#include "crtarmor/remainder_code.hpp"
#include "crtarmor/rng.hpp"
#include "crtarmor/sim.hpp"

namespace crtarmor {

namespace {

// Random instance with ground truth: good sets carry errors uniform in
// (-delta, delta), bad sets are replaced by uniform garbage.
struct Instance {
    ResidueTable table;
    std::vector<std::int64_t> truth_x;
    std::vector<std::uint64_t> truth_q;
    std::vector<std::size_t> bad_sets;
};

Instance random_instance(const ModulusSystem& sys, std::size_t bad_count, Rng& rng) {
    const auto range = default_x_range(sys);
    Instance inst;
    inst.truth_x.resize(sys.n_integers);
    inst.truth_q.resize(sys.n_integers);
    while (true) {
        for (std::size_t i = 0; i < sys.n_integers; ++i) {
            inst.truth_x[i] = rng.uniform_i64(range.first, range.second);
            inst.truth_q[i] = static_cast<std::uint64_t>(inst.truth_x[i]) / sys.gamma;
        }
        auto qs = inst.truth_q;
        std::sort(qs.begin(), qs.end());
        if (std::adjacent_find(qs.begin(), qs.end()) == qs.end()) break;
    }

    std::vector<std::size_t> all(sys.L());
    for (std::size_t l = 0; l < sys.L(); ++l) all[l] = l;
    for (std::size_t i = 0; i < bad_count; ++i)
        std::swap(all[i], all[rng.uniform_u64(i, sys.L() - 1)]);
    inst.bad_sets.assign(all.begin(), all.begin() + bad_count);
    std::sort(inst.bad_sets.begin(), inst.bad_sets.end());

    inst.table.sets.resize(sys.L());
    for (std::size_t l = 0; l < sys.L(); ++l) {
        const bool bad = std::binary_search(inst.bad_sets.begin(), inst.bad_sets.end(), l);
        for (std::size_t i = 0; i < sys.n_integers; ++i) {
            const double r =
                bad ? rng.uniform01() * static_cast<double>(sys.m[l])
                    : common_residue(static_cast<double>(inst.truth_x[i]) +
                                         rng.uniform(-sys.delta * 0.999, sys.delta * 0.999),
                                     sys.m[l])
                          .value;
            inst.table.sets[l].push_back(r);
        }
        std::sort(inst.table.sets[l].begin(), inst.table.sets[l].end());
    }
    return inst;
}

SelftestSuite decode_vs_oracle(std::size_t trials, std::uint64_t seed, bool inject_fault) {
    SelftestSuite suite{"remainder code vs exhaustive decoder", trials, 0};
    const std::vector<std::uint64_t> M = {3, 5, 7, 11, 13};
    const std::size_t K = 3;
    Rng rng(seed);

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t x = rng.uniform_u64(0, 104);
        ResidueVector v = encode(x, M);
        const std::size_t pos = rng.uniform_u64(0, M.size() - 1);
        const std::uint64_t wrong =
            (v.entries[pos] + rng.uniform_u64(1, M[pos] - 1)) % M[pos];
        v.entries[pos] = wrong;

        std::uint64_t decoded;
        try {
            decoded = unique_decode(v, K);
        } catch (const Error&) {
            ++suite.failures;
            continue;
        }
        if (inject_fault && t == 0) decoded ^= 1;

        const auto reference = oracle_decode(v, K);
        if (reference.size() != 1 || reference.front().first != decoded || decoded != x)
            ++suite.failures;
    }
    return suite;
}

SelftestSuite joint_recovery_vs_oracle(std::size_t trials, std::uint64_t seed) {
    SelftestSuite suite{"joint recovery vs exhaustive enumeration", trials, 0};
    Rng rng(seed);
    const std::vector<std::uint64_t> M = {3, 5, 7, 11};

    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t N = 1 + rng.uniform_u64(0, 1);
        const std::size_t K = 2;
        const std::size_t lambda = rng.uniform_u64(0, 1);
        const std::uint64_t bound = safe_value_bound(M, K, N, lambda);

        std::vector<std::uint64_t> truth(N);
        do {
            for (auto& q : truth) q = rng.uniform_u64(0, bound - 1);
            std::sort(truth.begin(), truth.end());
        } while (std::adjacent_find(truth.begin(), truth.end()) != truth.end());

        QuotientTable table;
        table.moduli = M;
        table.labels = {0, 1, 2, 3};
        table.sets.resize(M.size());
        for (std::size_t l = 0; l < M.size(); ++l)
            for (const std::uint64_t q : truth) table.sets[l].push_back(q % M[l]);
        for (std::size_t b = 0; b < lambda; ++b) {
            const std::size_t l = rng.uniform_u64(0, M.size() - 1);
            for (auto& r : table.sets[l]) r = rng.uniform_u64(0, M[l] - 1);
        }

        MultiCrtOptions opts;
        opts.value_bound = bound;

        bool robust_failed = false;
        MultiSolution sol;
        try {
            sol = multi_crt_robust(table, K, N, lambda, opts);
        } catch (const Error&) {
            robust_failed = true;
        }
        const auto reference = multi_crt_oracle(table, K, N, lambda, opts);

        if (robust_failed) {
            if (!reference.empty()) ++suite.failures;
            continue;
        }
        std::vector<std::uint64_t> values;
        for (const auto& m : sol.integers) values.push_back(m.value);
        if (reference.empty() || values != reference.front() ||
            sol.unique != (reference.size() == 1))
            ++suite.failures;
    }
    return suite;
}

SelftestSuite pruning_equivalence(std::size_t trials, std::uint64_t seed) {
    SelftestSuite suite{"pruned cuts vs full enumeration", trials, 0};
    Rng rng(seed);
    const ModulusSystem one = validate_system(1, 3.0, {3, 5, 7, 11}, 2);
    const ModulusSystem two = validate_system(2, 3.0, {3, 5, 7, 11, 13, 17}, 4);

    for (std::size_t t = 0; t < trials; ++t) {
        const ModulusSystem& sys = (t % 2 == 0) ? one : two;
        const std::size_t bad = (sys.L() - sys.K) / 2;
        const Instance inst = random_instance(sys, bad, rng);

        ArbitraryOptions opts;
        opts.value_bound = safe_value_bound(sys.M, sys.K, sys.n_integers, bad);

        const auto collect = [&](bool pruning) {
            opts.use_pruning = pruning;
            std::vector<std::int64_t> xs;
            for (const auto& rec : reconstruct_arbitrary(inst.table, sys, opts))
                xs.push_back(rec.x);
            std::sort(xs.begin(), xs.end());
            return xs;
        };

        try {
            const CutPlan plan = build_cut_plan(inst.table, sys);
            if (pruned_cuts(plan).size() > sys.n_integers) {
                ++suite.failures;
                continue;
            }
            if (collect(true) != collect(false)) ++suite.failures;
        } catch (const Error&) {
            ++suite.failures;
        }
    }
    return suite;
}

SelftestSuite trimming_invariants(std::size_t trials, std::uint64_t seed) {
    SelftestSuite suite{"trimmed spread and good-label retention", trials, 0};
    Rng rng(seed);
    const ModulusSystem sys = validate_system(2, 4.0, {3, 5, 7, 11, 13, 17}, 4);
    const std::size_t bad = (sys.L() - sys.K) / 2;

    for (std::size_t t = 0; t < trials; ++t) {
        const Instance inst = random_instance(sys, bad, rng);
        ArbitraryOptions opts;
        opts.value_bound = safe_value_bound(sys.M, sys.K, sys.n_integers, bad);

        try {
            for (const auto& rec : reconstruct_arbitrary(inst.table, sys, opts)) {
                const auto [lo, hi] =
                    std::minmax_element(rec.trimmed_values.begin(), rec.trimmed_values.end());
                if (*hi - *lo > 4.0 * sys.delta + 1e-9) ++suite.failures;

                for (const auto& entry : rec.correspondence) {
                    const bool good = !std::binary_search(inst.bad_sets.begin(),
                                                          inst.bad_sets.end(), entry.label);
                    if (!good || !entry.matched) continue;
                    if (std::find(rec.trimmed_labels.begin(), rec.trimmed_labels.end(),
                                  entry.label) == rec.trimmed_labels.end())
                        ++suite.failures;
                }
            }
        } catch (const Error&) {
            ++suite.failures;
        }
    }
    return suite;
}

}  // namespace

SelftestReport run_selftest(const SelftestOptions& opts) {
    const std::size_t scale = opts.full_scale ? 10 : 1;
    SelftestReport report;
    report.suites.push_back(
        decode_vs_oracle(2000 * scale, derive_seed(opts.seed, 1), opts.inject_fault));
    report.suites.push_back(joint_recovery_vs_oracle(500 * scale, derive_seed(opts.seed, 2)));
    report.suites.push_back(pruning_equivalence(300 * scale, derive_seed(opts.seed, 3)));
    report.suites.push_back(trimming_invariants(300 * scale, derive_seed(opts.seed, 4)));
    return report;
}

}  // namespace crtarmor
