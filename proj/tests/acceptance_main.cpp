// Acceptance battery entry point: one pass/fail line per criterion, exit 0
// only when every criterion holds.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "meissner/acceptance.hpp"

int main(int argc, char** argv) {
    meissner::acceptance::Options opts;
    opts.out_dir = "acceptance_out";
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--out" && i + 1 < argc) opts.out_dir = argv[++i];
        if (arg == "--seed" && i + 1 < argc) opts.seed = std::strtoull(argv[++i], nullptr, 10);
    }
    auto results = meissner::acceptance::run_all(opts);
    return meissner::acceptance::all_passed(results) ? 0 : 1;
}
