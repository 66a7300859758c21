#pragma once

// Shared generators for the randomized suites: instances with known ground
// truth, built independently of the reconstruction pipelines they exercise.

#include <algorithm>
#include <cmath>
#include <vector>

#include "crtarmor/modular.hpp"
#include "crtarmor/multi_crt.hpp"
#include "crtarmor/reconstruction.hpp"
#include "crtarmor/rng.hpp"
#include "crtarmor/sim.hpp"

namespace testsupport {

using namespace crtarmor;

struct Instance {
    ResidueTable table;
    std::vector<std::int64_t> truth_x;
    std::vector<std::uint64_t> truth_q;
    std::vector<double> truth_common;     // X mod gamma, per integer
    std::vector<std::size_t> bad_sets;    // sorted
    std::vector<std::vector<double>> delta;  // [set][integer]; bad sets hold garbage residues
};

// Ground truth with distinct folding numbers, drawn from the provably-unique
// range for the given tolerance. Folding numbers stay a full fold below the
// bound so that cut-dependent +1 representations still pass the value filter.
inline std::vector<std::int64_t> draw_truth(const ModulusSystem& sys, std::size_t lambda,
                                            Rng& rng) {
    const std::uint64_t bound = safe_value_bound(sys.M, sys.K, sys.n_integers, lambda);
    if (bound - 1 < sys.n_integers) raise(Errc::InvalidArgument, "range too narrow");
    const std::int64_t top = static_cast<std::int64_t>((bound - 1) * sys.gamma) - 1;
    std::vector<std::int64_t> xs(sys.n_integers);
    while (true) {
        std::vector<std::uint64_t> qs(sys.n_integers);
        for (std::size_t i = 0; i < sys.n_integers; ++i) {
            xs[i] = rng.uniform_i64(0, top);
            qs[i] = static_cast<std::uint64_t>(xs[i]) / sys.gamma;
        }
        std::sort(qs.begin(), qs.end());
        if (std::adjacent_find(qs.begin(), qs.end()) == qs.end()) return xs;
    }
}

// Residue table with per-slot errors uniform in (-delta, delta) on good sets
// and uniform garbage on `bad_count` randomly chosen sets.
inline Instance make_instance(const ModulusSystem& sys, std::size_t bad_count, Rng& rng) {
    const std::size_t lambda = (sys.L() - sys.K) / 2;
    Instance inst;
    inst.truth_x = draw_truth(sys, lambda, rng);
    for (const std::int64_t x : inst.truth_x) {
        inst.truth_q.push_back(static_cast<std::uint64_t>(x) / sys.gamma);
        inst.truth_common.push_back(
            static_cast<double>(static_cast<std::uint64_t>(x) % sys.gamma));
    }

    std::vector<std::size_t> order(sys.L());
    for (std::size_t l = 0; l < sys.L(); ++l) order[l] = l;
    for (std::size_t i = 0; i < bad_count; ++i)
        std::swap(order[i], order[rng.uniform_u64(i, sys.L() - 1)]);
    inst.bad_sets.assign(order.begin(), order.begin() + bad_count);
    std::sort(inst.bad_sets.begin(), inst.bad_sets.end());

    inst.delta.resize(sys.L());
    inst.table.sets.resize(sys.L());
    for (std::size_t l = 0; l < sys.L(); ++l) {
        const bool bad = std::binary_search(inst.bad_sets.begin(), inst.bad_sets.end(), l);
        for (std::size_t i = 0; i < sys.n_integers; ++i) {
            double residue;
            if (bad) {
                residue = rng.uniform01() * static_cast<double>(sys.m[l]);
                inst.delta[l].push_back(residue);
            } else {
                const double err = rng.uniform(-sys.delta * 0.9999, sys.delta * 0.9999);
                inst.delta[l].push_back(err);
                residue =
                    common_residue(static_cast<double>(inst.truth_x[i]) + err, sys.m[l]).value;
            }
            inst.table.sets[l].push_back(residue);
        }
        std::sort(inst.table.sets[l].begin(), inst.table.sets[l].end());
    }
    return inst;
}

// Permutation pairing estimates to ground truth with minimal total deviation.
inline std::vector<std::size_t> best_pairing(const std::vector<std::int64_t>& estimates,
                                             const std::vector<std::int64_t>& truth) {
    std::vector<std::size_t> perm(truth.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::vector<std::size_t> best = perm;
    double best_total = -1.0;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            total += std::fabs(static_cast<double>(estimates[i] - truth[perm[i]]));
        if (best_total < 0.0 || total < best_total) {
            best_total = total;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Largest per-pair deviation under the minimal-total-deviation pairing.
inline double paired_error(const std::vector<std::int64_t>& estimates,
                           const std::vector<std::int64_t>& truth) {
    if (estimates.size() != truth.size()) return 1e300;
    const auto perm = best_pairing(estimates, truth);
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        worst = std::max(worst,
                         std::fabs(static_cast<double>(estimates[i] - truth[perm[i]])));
    return worst;
}

// Checks that every recovered folding number equals the truth in the chosen
// cut's representation: an integer whose noisy common residues sit above the
// cut value is recovered as q+1 with the estimate lowered by gamma, which
// composes to the same value. The expected shift is derived from the
// instance's own errors at a surviving good set.
inline bool foldings_match_truth(const Instance& inst, const ModulusSystem& sys,
                                 const std::vector<Reconstruction>& recs) {
    if (recs.size() != inst.truth_x.size()) return false;
    std::vector<std::int64_t> estimates;
    for (const auto& rec : recs) estimates.push_back(rec.x);
    const auto perm = best_pairing(estimates, inst.truth_x);

    for (std::size_t r = 0; r < recs.size(); ++r) {
        const Reconstruction& rec = recs[r];
        const std::size_t i = perm[r];

        // any surviving good set tells which side of the cut this integer is on
        std::size_t good_label = sys.L();
        for (const auto& entry : rec.correspondence) {
            if (!std::binary_search(inst.bad_sets.begin(), inst.bad_sets.end(), entry.label)) {
                good_label = entry.label;
                break;
            }
        }
        if (good_label == sys.L()) return false;

        const double wrapped =
            common_residue(static_cast<double>(inst.truth_x[i]) + inst.delta[good_label][i],
                           sys.gamma)
                .value;
        const std::uint64_t shift = (!rec.cut_wrap && wrapped > rec.cut_gamma) ? 1 : 0;
        if (rec.folding != inst.truth_q[i] + shift) return false;
    }
    return true;
}

}  // namespace testsupport
