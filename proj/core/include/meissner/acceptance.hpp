#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace meissner::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::string out_dir = ".";
    std::uint64_t seed = 20180441;
    bool write_artifacts = true;
    bool verbose = true;  // one line per criterion on stdout
};

// Runs the full acceptance battery and returns one result per criterion.
std::vector<CriterionResult> run_all(const Options& options);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace meissner::acceptance
