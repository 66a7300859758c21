#include <doctest.h>

#include <algorithm>

#include "crtarmor/reconstruct_bounded.hpp"
#include "support.hpp"

using namespace crtarmor;

namespace {

ResidueTable table_of(std::vector<std::vector<double>> sets) { return ResidueTable{std::move(sets)}; }

}  // namespace

TEST_CASE("common residues come out sorted and labelled") {
    const ModulusSystem sys = validate_system(1, 1.0, {3, 5}, 2);
    const auto commons = sorted_common_residues(table_of({{1.5}, {4.5}}), sys);
    REQUIRE(commons.size() == 2);
    CHECK(commons.entries[0].gamma == doctest::Approx(0.5));
    CHECK(commons.entries[0].label == 1);
    CHECK(commons.entries[1].gamma == doctest::Approx(1.5));
    CHECK(commons.entries[1].label == 0);
    CHECK(commons.gamma == 4);
}

TEST_CASE("identical residues keep stable label order") {
    const ModulusSystem sys = validate_system(1, 1.0, {3, 5, 7}, 3);
    const auto commons = sorted_common_residues(table_of({{0.0}, {0.0}, {0.0}}), sys);
    REQUIRE(commons.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(commons.entries[j].gamma == doctest::Approx(0.0));
        CHECK(commons.entries[j].label == j);
    }
}

TEST_CASE("find_gap picks the first qualifying gap, wrap included") {
    const ModulusSystem sys = validate_system(1, 1.0, {3, 5}, 2);

    // interior gaps too small, wrap-around qualifies
    const auto wrap = find_gap(sorted_common_residues(table_of({{1.5}, {4.5}}), sys), sys);
    CHECK(wrap.wrap);
    CHECK(wrap.position == 1);
    CHECK(wrap.gamma == doctest::Approx(1.5));

    // interior gap 3.5 - 0.5 = 3 > 2 delta
    const auto interior = find_gap(sorted_common_residues(table_of({{0.5}, {3.5}}), sys), sys);
    CHECK_FALSE(interior.wrap);
    CHECK(interior.position == 0);
    CHECK(interior.gamma == doctest::Approx(0.5));

    // all gaps equal 2 delta: none qualifies
    CommonResidueList crowded;
    crowded.gamma = 4;
    for (std::size_t j = 0; j < 4; ++j)
        crowded.entries.push_back({static_cast<double>(j), j % 2, j});
    CHECK_THROWS_WITH_AS(find_gap(crowded, sys), doctest::Contains("NoGap"), Error);
}

TEST_CASE("unwrapping shifts residues above an interior cut") {
    const ModulusSystem sys = validate_system(1, 1.0, {3, 5}, 2);
    const auto table = table_of({{0.5}, {3.5}});
    const auto commons = sorted_common_residues(table, sys);
    const auto cut = find_gap(commons, sys);

    const auto unwrapped = unwrap_residues(table, commons, cut);
    CHECK(unwrapped.rows[0][0].hat == doctest::Approx(0.5));
    CHECK(unwrapped.rows[1][0].hat == doctest::Approx(-0.5));

    // wrap cut leaves everything in place
    const auto table2 = table_of({{1.5}, {4.5}});
    const auto commons2 = sorted_common_residues(table2, sys);
    const auto unwrapped2 = unwrap_residues(table2, commons2, find_gap(commons2, sys));
    CHECK(unwrapped2.rows[0][0].hat == doctest::Approx(1.5));
    CHECK(unwrapped2.rows[1][0].hat == doctest::Approx(0.5));
}

TEST_CASE("quotients are exact integers of the shifted residues") {
    const ModulusSystem sys = validate_system(1, 1.0, {3, 5}, 2);

    const auto table = table_of({{1.5}, {4.5}});
    UnwrappedTable un;
    un.rows = {{{1.5, 1.5}}, {{0.5, 4.5}}};
    const QuotientTable qt = quotient_residues(table, un, sys);
    CHECK(qt.sets[0] == std::vector<std::uint64_t>{0});
    CHECK(qt.sets[1] == std::vector<std::uint64_t>{1});

    const auto table2 = table_of({{1.5}, {3.5}});
    UnwrappedTable un2;
    un2.rows = {{{1.5, 1.5}}, {{-0.5, 3.5}}};
    const QuotientTable qt2 = quotient_residues(table2, un2, sys);
    CHECK(qt2.sets[1] == std::vector<std::uint64_t>{1});

    UnwrappedTable broken;
    broken.rows = {{{0.2, 1.5}}, {{0.5, 4.5}}};
    CHECK_THROWS_WITH_AS(quotient_residues(table, broken, sys),
                         doctest::Contains("NonIntegralQuotient"), Error);
}

TEST_CASE("worked single-integer reconstructions") {
    const ModulusSystem sys = validate_system(1, 1.0, {3, 5}, 2);

    // X = 25 with errors (+0.5, -0.5): residues (1.5, 4.5)
    auto recs = reconstruct_bounded(table_of({{1.5}, {4.5}}), sys);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].x == 25);
    CHECK(recs[0].folding == 6);
    CHECK(recs[0].residue_estimate == doctest::Approx(1.0));

    // X = 24 with the same errors: residues (0.5, 3.5), interior cut
    recs = reconstruct_bounded(table_of({{0.5}, {3.5}}), sys);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].x == 24);
    CHECK(recs[0].folding == 6);
    CHECK(recs[0].residue_estimate == doctest::Approx(0.0));
}

TEST_CASE("exact residues reconstruct exactly") {
    Rng rng(11);
    const ModulusSystem sys = validate_system(2, 2.0, {3, 5, 7}, 3);
    for (int t = 0; t < 200; ++t) {
        const auto truth = testsupport::draw_truth(sys, 0, rng);
        ResidueTable table;
        table.sets.resize(sys.L());
        for (std::size_t l = 0; l < sys.L(); ++l) {
            for (const std::int64_t x : truth)
                table.sets[l].push_back(
                    static_cast<double>(static_cast<std::uint64_t>(x) % sys.m[l]));
            std::sort(table.sets[l].begin(), table.sets[l].end());
        }
        std::vector<std::int64_t> estimates;
        for (const auto& rec : reconstruct_bounded(table, sys)) estimates.push_back(rec.x);
        CHECK(testsupport::paired_error(estimates, truth) == doctest::Approx(0.0));
    }
}

TEST_CASE("hats order like the true noisy residues") {
    Rng rng(12);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t n = 1 + rng.uniform_u64(0, 2);
        const double delta = 2 + static_cast<double>(rng.uniform_u64(0, 8));
        const ModulusSystem sys = validate_system(n, delta, {3, 5, 7}, 3);
        const auto inst = testsupport::make_instance(sys, 0, rng);

        const auto commons = sorted_common_residues(inst.table, sys);
        const auto cut = find_gap(commons, sys);
        const auto unwrapped = unwrap_residues(inst.table, commons, cut);

        // per integer, the sorted order of its hats must match the sorted
        // order of the true noisy common residues rc + error
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::pair<double, std::size_t>> hats, noisy;
            for (std::size_t l = 0; l < sys.L(); ++l) {
                // instance sets are sorted; locate integer i's slot by value
                const double expected =
                    common_residue(static_cast<double>(inst.truth_x[i]) + inst.delta[l][i],
                                   sys.m[l])
                        .value;
                const auto& set = inst.table.sets[l];
                const std::size_t slot = static_cast<std::size_t>(
                    std::find_if(set.begin(), set.end(),
                                 [&](double r) { return r == expected; }) -
                    set.begin());
                REQUIRE(slot < set.size());
                hats.push_back({unwrapped.rows[l][slot].hat, l});
                noisy.push_back({inst.truth_common[i] + inst.delta[l][i], l});
            }
            std::stable_sort(hats.begin(), hats.end());
            std::stable_sort(noisy.begin(), noisy.end());
            for (std::size_t k = 0; k < hats.size(); ++k)
                CHECK(hats[k].second == noisy[k].second);
        }
    }
}

TEST_CASE("the cut carries the largest hat and its successor the smallest") {
    Rng rng(13);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t n = 1 + rng.uniform_u64(0, 2);
        const double delta = 2 + static_cast<double>(rng.uniform_u64(0, 8));
        const ModulusSystem sys = validate_system(n, delta, {3, 5, 7}, 3);
        const auto inst = testsupport::make_instance(sys, 0, rng);

        const auto commons = sorted_common_residues(inst.table, sys);
        const auto cut = find_gap(commons, sys);
        const auto unwrapped = unwrap_residues(inst.table, commons, cut);

        std::vector<double> hats;
        for (const auto& row : unwrapped.rows)
            for (const auto& e : row) hats.push_back(e.hat);
        const auto [lo, hi] = std::minmax_element(hats.begin(), hats.end());

        const auto& cut_entry = commons.entries[cut.position];
        CHECK(unwrapped.rows[cut_entry.label][cut_entry.slot].hat == doctest::Approx(*hi));
        const auto& next_entry = commons.entries[(cut.position + 1) % commons.size()];
        CHECK(unwrapped.rows[next_entry.label][next_entry.slot].hat == doctest::Approx(*lo));
    }
}

TEST_CASE("bounded reconstruction stays within delta") {
    Rng rng(14);
    const std::vector<std::vector<std::uint64_t>> pools = {{3, 5}, {3, 5, 7}, {3, 5, 7, 11}};
    for (int t = 0; t < 2000; ++t) {
        const std::size_t n = 1 + rng.uniform_u64(0, 2);
        const double delta = static_cast<double>(rng.uniform_u64(2, 50));
        const auto& M = pools[rng.uniform_u64(0, pools.size() - 1)];
        const ModulusSystem sys = validate_system(n, delta, M, M.size());
        const auto inst = testsupport::make_instance(sys, 0, rng);

        BoundedOptions opts;
        opts.value_bound = safe_value_bound(sys.M, sys.K, n, 0);
        std::vector<std::int64_t> estimates;
        for (const auto& rec : reconstruct_bounded(inst.table, sys, opts))
            estimates.push_back(rec.x);
        CHECK(testsupport::paired_error(estimates, inst.truth_x) <= delta);
    }
}
