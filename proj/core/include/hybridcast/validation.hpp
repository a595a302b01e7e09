#pragma once

#include "hybridcast/date.hpp"
#include "hybridcast/timeseries.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hybridcast {

/// Rolling-window geometry in calendar months. `end` is inclusive.
struct WindowPlan {
    int train_months = 36;
    std::array<int, 3> val_months{8, 16, 24};
    int test_months = 12;
    int step_months = 12;
    Date start;
    Date end;

    static WindowPlan sp500();
    static WindowPlan bitcoin();
    void validate() const;
};

struct FoldSplit {
    std::size_t index = 0;
    DateRange train;
    std::array<DateRange, 3> val;  // nested prefixes of the validation span
    DateRange test;

    /// Training plus the full validation span; used for the final refit.
    DateRange fit_range() const { return {train.begin, val[2].end}; }
};

/// Pure calendar geometry; windows are emitted while the test range ends on
/// or before plan.end.
std::vector<FoldSplit> make_windows(const WindowPlan& plan);

/// Geometry plus a coverage check: every train, validation and test range
/// must hold at least one observation. Throws Error(InsufficientSpan).
std::vector<FoldSplit> make_windows(const WindowPlan& plan, const ReturnSeries& series);

/// Deterministic seed mixing (splitmix64 over the parts).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

/// Runs body(i) for i in [0, n) on up to `jobs` threads. The first exception
/// (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body);

enum class FitRole { Validation, Final };

struct FitContext {
    std::size_t window = 0;
    FitRole role = FitRole::Validation;
    DateRange fit_range;
    std::uint64_t seed = 0;
};

/// A fitted model that forecasts history[t] from history[0..t-1].
class FittedForecaster {
public:
    virtual ~FittedForecaster() = default;

    /// Forecasts for targets first_target .. history.size()-1.
    virtual std::vector<double> forecast_path(std::span<const double> history, std::size_t first_target) const = 0;

    /// Forecast of the value following `prefix`.
    virtual double forecast_next(std::span<const double> prefix) const = 0;
};

/// A method with a hyperparameter grid. Implementations must be safe to call
/// concurrently for distinct candidates.
class ModelFamily {
public:
    virtual ~ModelFamily() = default;

    virtual std::size_t grid_size() const = 0;
    virtual std::string describe(std::size_t candidate) const = 0;
    virtual std::unique_ptr<FittedForecaster> fit(std::size_t candidate, std::span<const double> train,
                                                  const FitContext& ctx) const = 0;
};

struct GridSearchReport {
    std::vector<std::array<double, 3>> fold_scores;
    std::vector<double> mean_scores;   // +inf for failed candidates
    std::vector<std::string> failures;  // empty string when the candidate succeeded
    std::size_t chosen = 0;
    std::string chosen_description;
};

/// Picks the candidate with the lowest mean validation RMSE over the three
/// folds (first in grid order on ties). Throws Error(AllCandidatesFailed).
GridSearchReport grid_search(const FoldSplit& split, const ModelFamily& family, const ReturnSeries& series,
                             std::uint64_t seed = 0, std::size_t jobs = 1);

struct WalkForwardOptions {
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    bool audit = false;
};

struct WindowOutcome {
    FoldSplit split;
    GridSearchReport report;
    std::size_t forecasts = 0;
    double seconds = 0.0;
};

/// Data-access audit: every forecast is recomputed from a prefix ending the
/// day before its target and compared with the bulk path.
struct LeakageAudit {
    std::size_t checked = 0;
    std::size_t violations = 0;
    double max_abs_diff = 0.0;
    std::vector<std::string> messages;  // first few violations

    bool passed() const noexcept { return checked > 0 && violations == 0; }
};

struct WalkForwardResult {
    ReturnSeries forecasts;  // one per out-of-sample day, dated at the target
    ReturnSeries actuals;
    std::vector<WindowOutcome> windows;
    LeakageAudit audit;
};

WalkForwardResult run_walk_forward(const WindowPlan& plan, const ModelFamily& family, const ReturnSeries& series,
                                   const WalkForwardOptions& options = {});

}  // namespace hybridcast
