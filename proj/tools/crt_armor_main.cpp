#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "crtarmor/io.hpp"
#include "crtarmor/reconstruct_arbitrary.hpp"
#include "crtarmor/reconstruct_bounded.hpp"
#include "crtarmor/selftest.hpp"
#include "crtarmor/sim.hpp"

namespace {

using crtarmor::Errc;
using crtarmor::Error;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitAmbiguous = 2;
constexpr int kExitSelftest = 3;

json reconstruction_to_json(const crtarmor::Reconstruction& rec) {
    json j;
    j["x"] = rec.x;
    j["folding"] = rec.folding;
    j["residue_estimate"] = rec.residue_estimate;
    j["cut_index"] = rec.cut_index;
    j["cut_gamma"] = rec.cut_gamma;
    j["cut_wrap"] = rec.cut_wrap;
    j["unique"] = rec.unique;
    j["trimmed_labels"] = rec.trimmed_labels;
    j["trimmed_values"] = rec.trimmed_values;
    json corr = json::array();
    for (const auto& entry : rec.correspondence) {
        json e;
        e["label"] = entry.label;
        e["matched"] = entry.matched;
        if (entry.matched) {
            e["residue"] = entry.residue;
            e["hats"] = entry.hats;
            e["ambiguous"] = entry.ambiguous;
        }
        corr.push_back(std::move(e));
    }
    j["correspondence"] = std::move(corr);
    return j;
}

void print_table(const std::vector<crtarmor::Reconstruction>& recs) {
    std::printf("%-4s %-14s %-12s %-16s %-10s\n", "#", "x_estimate", "folding",
                "residue_estimate", "cut_gamma");
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& rec = recs[i];
        std::printf("%-4zu %-14lld %-12llu %-16.6f %-10.4f%s\n", i,
                    static_cast<long long>(rec.x), static_cast<unsigned long long>(rec.folding),
                    rec.residue_estimate, rec.cut_gamma, rec.cut_wrap ? " (wrap)" : "");
        std::printf("     matched sets:");
        for (const auto& entry : rec.correspondence) {
            if (!entry.matched) continue;
            std::printf(" %zu:%llu", entry.label,
                        static_cast<unsigned long long>(entry.residue));
            if (entry.ambiguous) std::printf("*");
        }
        std::printf("\n");
    }
}

int cmd_reconstruct(const std::string& input, bool bounded, bool mle, bool as_json) {
    const crtarmor::ProblemFile problem = crtarmor::load_problem(input);
    for (const std::string& w : problem.warnings) std::cerr << "warning: " << w << "\n";

    std::vector<crtarmor::Reconstruction> recs;
    if (bounded) {
        recs = crtarmor::reconstruct_bounded(problem.table, problem.system);
    } else {
        crtarmor::ArbitraryOptions opts;
        opts.use_mle = mle;
        if (problem.noise) opts.variances = problem.noise->variances;
        recs = crtarmor::reconstruct_arbitrary(problem.table, problem.system, opts);
    }

    if (as_json) {
        json out;
        out["estimates"] = json::array();
        for (const auto& rec : recs) out["estimates"].push_back(reconstruction_to_json(rec));
        std::cout << out.dump(2) << "\n";
    } else {
        print_table(recs);
    }
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed_override) {
    crtarmor::ParsedSimConfig parsed = crtarmor::load_sim_config(config_path);
    for (const std::string& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
    if (seed_override) parsed.config.seed = *seed_override;

    const crtarmor::SimReport report = crtarmor::snr_sweep(parsed.config);
    const std::string csv = crtarmor::to_csv(report);

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitInput;
        }
        out << csv;
    }

    std::printf("%10s %14s %8s %10s %8s\n", "snr_db", "sigma", "trials", "successes", "rate");
    for (const auto& row : report.rows)
        std::printf("%10.1f %14.6g %8zu %10zu %8.4f\n", row.snr_db, row.sigma, row.trials,
                    row.successes, row.success_rate);
    return kExitOk;
}

int cmd_selftest(bool full, bool inject_fault) {
    crtarmor::SelftestOptions opts;
    opts.full_scale = full;
    opts.inject_fault = inject_fault;

    const crtarmor::SelftestReport report = crtarmor::run_selftest(opts);
    for (const auto& suite : report.suites)
        std::printf("%-45s %6zu trials  %4zu failures  %s\n", suite.name.c_str(), suite.trials,
                    suite.failures, suite.failures == 0 ? "ok" : "FAILED");
    if (!report.passed()) {
        std::printf("selftest FAILED\n");
        return kExitSelftest;
    }
    std::printf("selftest passed\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust reconstruction of integers from unordered, erroneous residue sets"};
    app.require_subcommand(1);

    // reconstruct
    std::string input_path;
    bool flag_bounded = false, flag_arbitrary = false, flag_mle = false;
    bool flag_json = false, flag_table = false;
    auto* rec = app.add_subcommand("reconstruct", "Reconstruct integers from a problem file");
    rec->add_option("input", input_path, "problem JSON file")->required();
    rec->add_flag("--bounded", flag_bounded, "all residue errors below delta");
    rec->add_flag("--arbitrary", flag_arbitrary,
                  "tolerate up to floor((L-K)/2) wholly corrupted sets (default)");
    rec->add_flag("--mle", flag_mle, "trimmed variance-weighted residue estimate");
    rec->add_flag("--json", flag_json, "machine-readable output");
    rec->add_flag("--table", flag_table, "human-readable output (default)");

    // simulate
    std::string config_path, out_path;
    std::optional<std::uint64_t> seed_override;
    auto* sim = app.add_subcommand("simulate", "Run an SNR sweep from a config file");
    sim->add_option("config", config_path, "sweep config JSON file")->required();
    sim->add_option("--out", out_path, "CSV output path");
    sim->add_option("--seed", seed_override, "override the config seed");

    // selftest
    std::string scale = "small";
    bool inject_fault = false;
    auto* self = app.add_subcommand("selftest", "Run the built-in oracle cross-checks");
    self->add_option("--scale", scale, "small|full")->check(CLI::IsMember({"small", "full"}));
    self->add_flag("--inject-fault", inject_fault, "negative control: corrupt one decode")
        ->group("");  // hidden

    CLI11_PARSE(app, argc, argv);

    try {
        if (rec->parsed()) {
            if (flag_bounded && flag_arbitrary) {
                std::cerr << "error: --bounded and --arbitrary are mutually exclusive\n";
                return kExitInput;
            }
            if (flag_json && flag_table) {
                std::cerr << "error: --json and --table are mutually exclusive\n";
                return kExitInput;
            }
            return cmd_reconstruct(input_path, flag_bounded, flag_mle, flag_json);
        }
        if (sim->parsed()) return cmd_simulate(config_path, out_path, seed_override);
        if (self->parsed()) return cmd_selftest(scale == "full", inject_fault);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::AmbiguousReconstruction ? kExitAmbiguous : kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
