#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "varlp/cli/scenario.hpp"
#include "varlp/theorems.hpp"

namespace varlp::cli {

struct RunOptions {
    std::optional<std::filesystem::path> out;  ///< overrides the scenario's output directory
    std::optional<std::size_t> levels;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    std::ostream* log = nullptr;  ///< progress lines; nothing when null or quiet
};

struct SummaryRow {
    std::string probe;
    std::string level;  ///< level index, or "all" for cross-level checks
    std::string verdict;  ///< pass | fail | inconclusive | error
    double key_value = 0.0;
    std::string notes;
};

struct RunResult {
    int exit_code = 0;  ///< 0 all verdicts reached, 2 any inconclusive, 1 any error
    std::vector<SummaryRow> summary;
    std::filesystem::path out_dir;
};

/// One-line description per probe name, for list-probes.
[[nodiscard]] std::string probe_description(const std::string& name);

/// Runs every probe at every level and writes summary.csv, <id>.json and
/// <id>.csv into the output directory.
[[nodiscard]] RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

} // namespace varlp::cli
