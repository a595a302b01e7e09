#pragma once

#include "hybridcast/backtest.hpp"
#include "hybridcast/experiment/config.hpp"
#include "hybridcast/experiment/methods.hpp"
#include "hybridcast/timeseries.hpp"
#include "hybridcast/validation.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hybridcast::experiment {

inline constexpr std::array<StrategyMode, 2> kStrategies{StrategyMode::LongShort, StrategyMode::LongOnly};

struct MethodResult {
    MethodSpec spec;
    std::string label;
    std::string error;  // non-empty when the method failed
    std::optional<WalkForwardResult> walk_forward;
    std::array<BacktestResult, 2> backtests;  // indexed like kStrategies
    double seconds = 0.0;

    bool failed() const noexcept { return !error.empty(); }
};

struct AssetResult {
    AssetConfig asset;
    ReturnSeries log_returns;
    ReturnSeries simple_returns;
    DescriptiveStats stats;
    std::vector<FoldSplit> windows;
    std::vector<MethodResult> methods;
};

struct PortfolioRow {
    std::string label;
    std::array<BacktestResult, 2> backtests;
};

struct RunResult {
    std::vector<AssetResult> assets;
    std::vector<PortfolioRow> portfolio;  // filled when exactly two assets are configured
    double seconds = 0.0;

    std::size_t failures() const;
};

/// Loads data, runs every configured method through the walk-forward and
/// both strategies. Method failures are captured, not thrown. Progress goes
/// to `log` when given.
RunResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// FNV-1a 64 over the bytes, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace hybridcast::experiment
