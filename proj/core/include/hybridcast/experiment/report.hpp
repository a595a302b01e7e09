#pragma once

#include "hybridcast/experiment/config.hpp"
#include "hybridcast/experiment/runner.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hybridcast::experiment {

inline constexpr const char* kMetricsHeader = "method,rmse,mae,arc,asd,md,ir,ir_star,sr";

/// One metrics row as written to the tables.
std::string metrics_row(const std::string& label, const Metrics& m);

/// Writes tables, equity lines, plots and manifest.json into `outdir`.
/// Returns the emitted file names (relative to outdir), manifest included.
std::vector<std::string> emit_reports(const RunResult& result, const ExperimentConfig& cfg,
                                      const std::filesystem::path& outdir);

/// Table-style descriptive statistics for the `describe` command.
std::string format_descriptive(const std::string& name, const DescriptiveStats& s);

}  // namespace hybridcast::experiment
