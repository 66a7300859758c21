#include "crtarmor/reconstruct_arbitrary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "assemble.hpp"
#include "crtarmor/multi_crt.hpp"

namespace crtarmor {

namespace {

// Clockwise distance from a to b on the circle, in (0, gamma]; 0 when equal.
double clockwise_gap(double a, double b, std::uint64_t gamma) {
    return common_residue(b - a, gamma).value;
}

bool inside_interval(double candidate, double anchor, double width, std::uint64_t gamma) {
    const double d = clockwise_gap(anchor, candidate, gamma);
    return d > 0.0 && d <= width;
}

std::size_t max_bad_sets(const ModulusSystem& system) { return (system.L() - system.K) / 2; }

}  // namespace

CutPlan build_cut_plan(const ResidueTable& table, const ModulusSystem& system) {
    if (system.L() <= system.K)
        raise(Errc::InvalidArgument, "arbitrary-error reconstruction needs redundant moduli");

    CutPlan plan;
    plan.commons = sorted_common_residues(table, system);
    const auto& entries = plan.commons.entries;
    const std::size_t count = entries.size();
    const double width = 2.0 * system.delta;
    const std::size_t lambda = max_bad_sets(system);
    const std::size_t dense_threshold = system.K + lambda;

    plan.interval_labels.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        std::vector<std::size_t> labels;
        for (std::size_t k = 0; k < count; ++k) {
            if (k == j) continue;
            if (inside_interval(entries[k].gamma, entries[j].gamma, width, system.gamma))
                labels.push_back(entries[k].label);
        }
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

        const bool own_label_inside =
            std::binary_search(labels.begin(), labels.end(), entries[j].label);
        if (labels.size() <= lambda && !own_label_inside) plan.cut_candidates.push_back(j);
        if (labels.size() >= dense_threshold) plan.dense.push_back(j);
        plan.interval_labels[j] = std::move(labels);
    }

    // Split the dense entries into circular runs: two entries chain when one
    // lies inside the other's interval.
    const auto adjacent = [&](std::size_t a, std::size_t b) {
        return inside_interval(entries[b].gamma, entries[a].gamma, width, system.gamma) ||
               inside_interval(entries[a].gamma, entries[b].gamma, width, system.gamma);
    };
    if (!plan.dense.empty()) {
        std::vector<std::vector<std::size_t>> runs;
        runs.push_back({plan.dense.front()});
        for (std::size_t i = 1; i < plan.dense.size(); ++i) {
            if (adjacent(runs.back().back(), plan.dense[i]))
                runs.back().push_back(plan.dense[i]);
            else
                runs.push_back({plan.dense[i]});
        }
        if (runs.size() > 1 && adjacent(runs.back().back(), runs.front().front())) {
            // the last run wraps around into the first
            runs.back().insert(runs.back().end(), runs.front().begin(), runs.front().end());
            runs.front() = std::move(runs.back());
            runs.pop_back();
        }
        plan.dense_runs = std::move(runs);
    }
    return plan;
}

std::vector<std::size_t> pruned_cuts(const CutPlan& plan) {
    if (plan.cut_candidates.empty())
        raise(Errc::EmptyScriptN, "no sparse cut candidate; too many corrupted sets");

    if (plan.dense_runs.empty()) return {plan.cut_candidates.front()};

    const std::size_t count = plan.commons.size();
    std::vector<std::size_t> cuts;
    for (const auto& run : plan.dense_runs) {
        std::size_t pos = run.front();
        for (std::size_t step = 0; step < count; ++step) {
            pos = (pos + count - 1) % count;
            if (std::binary_search(plan.cut_candidates.begin(), plan.cut_candidates.end(), pos)) {
                cuts.push_back(pos);
                break;
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

std::vector<Reconstruction> reconstruct_arbitrary(const ResidueTable& table,
                                                  const ModulusSystem& system,
                                                  const ArbitraryOptions& opts) {
    const CutPlan plan = build_cut_plan(table, system);
    const auto& entries = plan.commons.entries;
    const std::size_t lambda = max_bad_sets(system);

    std::vector<std::size_t> cut_order;
    if (opts.use_pruning) {
        cut_order = pruned_cuts(plan);
        for (const std::size_t j : plan.cut_candidates)
            if (std::find(cut_order.begin(), cut_order.end(), j) == cut_order.end())
                cut_order.push_back(j);
    } else {
        if (plan.cut_candidates.empty())
            raise(Errc::EmptyScriptN, "no sparse cut candidate; too many corrupted sets");
        cut_order = plan.cut_candidates;
    }

    NoiseModel noise;
    if (!opts.variances.empty()) {
        if (opts.variances.size() != system.L())
            raise(Errc::InvalidArgument, "need one variance per residue set");
        noise.variances = opts.variances;
    }

    for (const std::size_t cut : cut_order) {
        const auto& blamed = plan.interval_labels[cut];

        std::vector<std::size_t> survivors;
        for (std::size_t l = 0; l < system.L(); ++l)
            if (!std::binary_search(blamed.begin(), blamed.end(), l)) survivors.push_back(l);
        if (survivors.size() < system.K) continue;

        // position of the cut entry among surviving commons decides whether
        // it is the last one (identity unwrap) or an interior cut
        bool is_last = true;
        for (std::size_t k = cut + 1; k < entries.size(); ++k) {
            if (!std::binary_search(blamed.begin(), blamed.end(), entries[k].label)) {
                is_last = false;
                break;
            }
        }
        const double cut_value = entries[cut].gamma;
        const double gamma = static_cast<double>(system.gamma);

        QuotientTable qt;
        std::vector<std::vector<double>> hats;
        bool integral = true;
        for (const std::size_t l : survivors) {
            qt.labels.push_back(l);
            qt.moduli.push_back(system.M[l]);
            std::vector<std::uint64_t> quotients;
            std::vector<double> hat_row;
            for (const double full : table.sets[l]) {
                const double rc = common_residue(full, system.gamma).value;
                const double hat = (!is_last && rc > cut_value) ? rc - gamma : rc;
                const double q_real = (full - hat) / gamma;
                const double rounded = std::round(q_real);
                if (std::fabs(q_real - rounded) > 1e-9) {
                    integral = false;
                    break;
                }
                const std::int64_t modulus = static_cast<std::int64_t>(system.M[l]);
                const std::int64_t q = static_cast<std::int64_t>(rounded);
                quotients.push_back(static_cast<std::uint64_t>(((q % modulus) + modulus) % modulus));
                hat_row.push_back(hat);
            }
            if (!integral) break;
            qt.sets.push_back(std::move(quotients));
            hats.push_back(std::move(hat_row));
        }
        if (!integral)
            raise(Errc::NonIntegralQuotient, "residue minus hat is not a multiple of gamma");

        MultiCrtOptions mopts;
        mopts.value_bound = opts.value_bound;
        mopts.enumeration_guard = opts.enumeration_guard;

        MultiSolution sol;
        try {
            sol = multi_crt_robust(qt, system.K, system.n_integers, lambda, mopts);
        } catch (const Error& e) {
            if (e.code() == Errc::NoSolution) continue;
            throw;
        }
        if (!sol.unique) continue;

        detail::AssemblyView view{&qt.sets, &hats, &qt.labels, &qt.moduli};
        std::vector<Reconstruction> out;
        out.reserve(sol.integers.size());
        for (const IntegerMatch& match : sol.integers) {
            Reconstruction rec =
                detail::assemble_one(match, view, system.gamma, system.delta, system.K,
                                     /*use_trimming=*/opts.use_mle,
                                     /*plain_skips_ambiguous=*/false, noise);
            rec.cut_index = cut;
            rec.cut_gamma = cut_value;
            rec.cut_wrap = is_last;
            rec.unique = true;
            out.push_back(std::move(rec));
        }
        return out;
    }

    raise(Errc::AmbiguousReconstruction, "no cut produced a unique joint recovery");
}

}  // namespace crtarmor
