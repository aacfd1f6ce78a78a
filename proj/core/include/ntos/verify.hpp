#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ntos::verify {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    unsigned threads = 0;  // 0 = hardware
    bool quick = false;    // reduced bounds for smoke runs
};

// The full invariant suite: ten independent checks, each with its tolerance
// pinned in code. Exact-arithmetic checks carry zero tolerance. The naive
// reference implementations used as oracles live in this module and share no
// code with the paths they check.
std::vector<CheckResult> run_acceptance(const VerifyOptions& options = {});

}  // namespace ntos::verify
