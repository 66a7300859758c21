#include "crtarmor/reconstruct_bounded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "assemble.hpp"

namespace crtarmor {

namespace {

void check_table(const ResidueTable& table, const ModulusSystem& system) {
    if (table.sets.size() != system.L())
        raise(Errc::InvalidArgument, "residue table has " + std::to_string(table.sets.size()) +
                                         " sets for " + std::to_string(system.L()) + " moduli");
    for (std::size_t l = 0; l < table.sets.size(); ++l) {
        if (table.sets[l].empty() || table.sets[l].size() > system.n_integers)
            raise(Errc::InvalidArgument, "set " + std::to_string(l) + " must hold 1.." +
                                             std::to_string(system.n_integers) + " residues");
        for (const double r : table.sets[l])
            if (!(r >= 0.0) || r >= static_cast<double>(system.m[l]))
                raise(Errc::OutOfRange, "residue outside [0, m_l) in set " + std::to_string(l));
    }
}

}  // namespace

CommonResidueList sorted_common_residues(const ResidueTable& table, const ModulusSystem& system) {
    check_table(table, system);

    CommonResidueList commons;
    commons.gamma = system.gamma;
    for (std::size_t l = 0; l < table.sets.size(); ++l)
        for (std::size_t s = 0; s < table.sets[l].size(); ++s)
            commons.entries.push_back(
                {common_residue(table.sets[l][s], system.gamma).value, l, s});

    std::sort(commons.entries.begin(), commons.entries.end(),
              [](const CommonResidue& a, const CommonResidue& b) {
                  if (a.gamma != b.gamma) return a.gamma < b.gamma;
                  if (a.label != b.label) return a.label < b.label;
                  return a.slot < b.slot;
              });
    // identical values within one set are a single common residue
    commons.entries.erase(std::unique(commons.entries.begin(), commons.entries.end(),
                                      [](const CommonResidue& a, const CommonResidue& b) {
                                          return a.gamma == b.gamma && a.label == b.label;
                                      }),
                          commons.entries.end());
    return commons;
}

GapCut find_gap(const CommonResidueList& commons, const ModulusSystem& system) {
    if (commons.entries.empty()) raise(Errc::EmptyInput, "no common residues");
    const double width = 2.0 * system.delta;
    const auto& e = commons.entries;

    for (std::size_t j = 0; j + 1 < e.size(); ++j)
        if (e[j + 1].gamma - e[j].gamma > width) return {j, false, e[j].gamma};

    if (e.front().gamma - e.back().gamma + static_cast<double>(system.gamma) > width)
        return {e.size() - 1, true, e.back().gamma};

    raise(Errc::NoGap, "no gap wider than 2*delta; the error bound does not hold");
}

UnwrappedTable unwrap_residues(const ResidueTable& table, const CommonResidueList& commons,
                               const GapCut& cut) {
    if (commons.gamma == 0) raise(Errc::InvalidArgument, "common residues carry no modulus");
    const double gamma = static_cast<double>(commons.gamma);

    UnwrappedTable out;
    out.rows.resize(table.sets.size());
    for (std::size_t l = 0; l < table.sets.size(); ++l) {
        out.rows[l].reserve(table.sets[l].size());
        for (const double full : table.sets[l]) {
            const double rc = common_residue(full, commons.gamma).value;
            const double hat = (!cut.wrap && rc > cut.gamma) ? rc - gamma : rc;
            out.rows[l].push_back({hat, full});
        }
    }
    return out;
}

QuotientTable quotient_residues(const ResidueTable& table, const UnwrappedTable& unwrapped,
                                const ModulusSystem& system) {
    QuotientTable qt;
    qt.moduli = system.M;
    qt.labels.resize(system.L());
    for (std::size_t l = 0; l < system.L(); ++l) qt.labels[l] = l;

    qt.sets.resize(system.L());
    for (std::size_t l = 0; l < system.L(); ++l) {
        for (std::size_t s = 0; s < table.sets[l].size(); ++s) {
            const double q_real =
                (table.sets[l][s] - unwrapped.rows[l][s].hat) / static_cast<double>(system.gamma);
            const double rounded = std::round(q_real);
            if (std::fabs(q_real - rounded) > 1e-9)
                raise(Errc::NonIntegralQuotient,
                      "(residue - hat)/gamma = " + std::to_string(q_real) + " is not integral");
            const std::int64_t q = static_cast<std::int64_t>(rounded);
            const std::int64_t modulus = static_cast<std::int64_t>(system.M[l]);
            qt.sets[l].push_back(static_cast<std::uint64_t>(((q % modulus) + modulus) % modulus));
        }
    }
    return qt;
}

std::vector<Reconstruction> reconstruct_bounded(const ResidueTable& table,
                                                const ModulusSystem& system,
                                                const BoundedOptions& opts) {
    const CommonResidueList commons = sorted_common_residues(table, system);
    const GapCut cut = find_gap(commons, system);
    const UnwrappedTable unwrapped = unwrap_residues(table, commons, cut);
    const QuotientTable qt = quotient_residues(table, unwrapped, system);

    MultiCrtOptions mopts;
    mopts.value_bound = opts.value_bound;
    const MultiSolution sol = multi_crt_exact(qt, system.K, system.n_integers, mopts);

    std::vector<std::vector<double>> hats(system.L());
    for (std::size_t l = 0; l < system.L(); ++l)
        for (const UnwrappedEntry& e : unwrapped.rows[l]) hats[l].push_back(e.hat);

    detail::AssemblyView view{&qt.sets, &hats, &qt.labels, &qt.moduli};
    std::vector<Reconstruction> out;
    out.reserve(sol.integers.size());
    for (const IntegerMatch& match : sol.integers) {
        Reconstruction rec = detail::assemble_one(match, view, system.gamma, system.delta,
                                                  system.K, /*use_trimming=*/false,
                                                  /*plain_skips_ambiguous=*/true, NoiseModel{});
        rec.cut_index = cut.position;
        rec.cut_gamma = cut.gamma;
        rec.cut_wrap = cut.wrap;
        rec.unique = sol.unique;
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace crtarmor
