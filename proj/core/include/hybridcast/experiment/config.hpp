#pragma once

#include "hybridcast/econometric.hpp"
#include "hybridcast/learners/svr.hpp"
#include "hybridcast/timeseries.hpp"
#include "hybridcast/validation.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hybridcast::experiment {

struct AssetConfig {
    std::string name;
    std::filesystem::path data;
    CsvSpec csv;
    std::string preset;  // sp500, bitcoin or custom
    WindowPlan plan;
    double tc = 0.00005;
    int trading_days = 252;
};

/// Hyperparameter search spaces shared by every method that uses them.
struct GridConfig {
    std::vector<std::size_t> lags{5, 10, 22};
    std::vector<double> svr_c{0.1, 1.0, 10.0};
    std::vector<double> svr_epsilon{1e-4, 1e-3};
    std::vector<KernelType> svr_kernels{KernelType::Linear, KernelType::Rbf};
    int svr_degree = 3;
    std::vector<std::size_t> gbt_trees{100, 300};
    std::vector<int> gbt_depth{2, 3};
    std::vector<double> gbt_learning_rate{0.05, 0.1};
    double gbt_lambda = 1.0;
    double gbt_gamma = 0.0;
    std::vector<std::size_t> lstm_hidden{8, 16};
    std::vector<std::size_t> lstm_sequence{10, 22};
    std::vector<std::size_t> lstm_epochs{100};
    std::vector<double> lstm_learning_rate{0.01};
    std::size_t lstm_batch = 32;
};

struct ExperimentConfig {
    std::uint64_t seed = 42;
    std::filesystem::path output = "results";
    std::size_t jobs = 1;
    bool audit = false;
    bool log_scale = true;
    std::vector<AssetConfig> assets;
    std::vector<std::string> methods;
    OrderBounds bounds;
    ArfimaOptions arfima;
    GridConfig grids;

    /// Canonical text the config hash is computed from.
    std::string source_text;
};

/// Reads a YAML config. Relative data paths resolve against the config's
/// directory. Throws Error(Config) with line and field on invalid input.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

KernelType parse_kernel(std::string_view name);

}  // namespace hybridcast::experiment
