#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "imq/config.hpp"
#include "json.hpp"

namespace imq {

/// Outcome of one experiment. `artifacts` maps file names (relative to the
/// output directory) to their full contents; report.json is produced by
/// emit_report from `summary`.
struct ExperimentReport {
    nlohmann::ordered_json summary;
    std::vector<std::pair<std::string, std::string>> artifacts;
    bool passed = false;

    /// 0 when every configured tolerance holds, 2 otherwise.
    int exit_code() const { return passed ? 0 : 2; }
};

[[nodiscard]] ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes report.json and every artifact into out_dir (created if needed).
/// Returns the paths written, report.json first.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir);

}  // namespace imq
