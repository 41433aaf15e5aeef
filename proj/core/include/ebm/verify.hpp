#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ebm {

struct PropertyResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;  // worst observed metric
    double tolerance = 0.0; // threshold compared against
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int cases = 0;    // 0 = per-suite default
    std::string only; // substring filter on suite names
    int threads = 0;  // 0 = thread_budget()
};

// Seeded property suites covering every module invariant; deterministic for
// a fixed seed regardless of thread count.
std::vector<PropertyResult> run_verify(const VerifyOptions& opt);

std::string verify_report(const std::vector<PropertyResult>& results);

} // namespace ebm
