#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gbe::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct Options {
    std::uint64_t seed = 2718;
    unsigned workers = 0;
    bool verbose = false;
};

// Runs the full acceptance battery, streaming one PASS/FAIL line per
// criterion to `os`. Returns all results; overall success is the conjunction.
std::vector<CriterionResult> run_all(const Options& opts, std::ostream& os);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace gbe::acceptance
