#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "meissner/boundary.hpp"
#include "meissner/superheating.hpp"
#include "meissner/table.hpp"

namespace meissner::lab {

using json = nlohmann::json;

// Validated run configuration.  Unknown keys anywhere in the document are
// errors (fail fast); the parse -> serialize -> parse round trip is identity.
struct RunConfig {
    std::string kind;
    std::uint64_t seed = 1;
    std::string out;
    json raw;  // canonical validated document

    static RunConfig parse(const json& doc);
    json to_json() const { return raw; }
};

struct RunOutcome {
    int exit_code = 0;          // 0 ok, 2 config, 3 solver, 4 acceptance
    json summary;               // machine-readable result or error
};

// Executes a config and writes CSV/JSON/SVG artifacts into `out_dir`.
RunOutcome run(const RunConfig& config, const std::string& out_dir, int jobs);

// Convenience wrapper: reads, validates, applies overrides, runs.  Never
// throws; failures come back as the exit code plus an error JSON.
RunOutcome run_file(const std::string& config_path, const std::string& out_override,
                    std::int64_t seed_override, int jobs);

StaggeredGrid parse_geometry(const json& g);
BoundaryData parse_data(const json& d, const StaggeredGrid& grid);
ContinuationSchedule parse_schedule(const json& s);

}  // namespace meissner::lab
