#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crtarmor {

struct SelftestOptions {
    bool full_scale = false;    // 10x trial counts
    bool inject_fault = false;  // deliberately corrupt one decode (negative control)
    std::uint64_t seed = 0xC0FFEE;
};

struct SelftestSuite {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
};

struct SelftestReport {
    std::vector<SelftestSuite> suites;

    bool passed() const {
        for (const auto& s : suites)
            if (s.failures != 0) return false;
        return true;
    }
};

// Randomized cross-checks of the decoders against their exhaustive
// references, plus the structural invariants the pipelines rely on.
SelftestReport run_selftest(const SelftestOptions& opts = {});

}  // namespace crtarmor
