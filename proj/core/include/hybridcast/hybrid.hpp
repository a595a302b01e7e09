#pragma once

#include "hybridcast/econometric.hpp"
#include "hybridcast/learners/regressor.hpp"
#include "hybridcast/timeseries.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hybridcast {

/// Feature: the learner sees lagged returns plus the linear forecast.
/// Residual: the learner models lagged linear residuals; outputs are summed.
enum class HybridMode { Feature = 1, Residual = 2 };

/// Result-table label, e.g. "SVM-ARIMA (1)".
std::string hybrid_label(LinearKind linear, LearnerKind learner, HybridMode mode);

struct HybridSpec {
    LinearKind linear_kind = LinearKind::Arima;
    LearnerParams learner;
    HybridMode mode = HybridMode::Residual;
    std::size_t lag_n = 5;
    OrderBounds bounds;
    ArfimaOptions arfima;

    std::string label() const { return hybrid_label(linear_kind, learner.kind, mode); }
};

struct HybridModel {
    FittedLinearModel linear;
    std::shared_ptr<const Regressor> nonlinear;
    HybridMode mode = HybridMode::Residual;
    std::size_t lag_n = 0;

    /// Shortest history for which a forecast exists.
    std::size_t min_history() const;
};

/// Order-selected ARIMA or ARFIMA fit.
FittedLinearModel fit_linear(LinearKind kind, std::span<const double> x, const OrderBounds& bounds = {},
                             const ArfimaOptions& arfima = {});

/// Training design for the nonlinear part of a hybrid. Residual mode: lagged
/// residuals with target e_t. Feature mode: lagged returns plus the in-sample
/// fitted linear value, target x_t.
FeatureMatrix hybrid_training_matrix(const FittedLinearModel& linear, HybridMode mode, std::size_t lag_n,
                                     std::span<const double> x);

HybridModel fit_hybrid(const HybridSpec& spec, std::span<const double> train);
HybridModel fit_hybrid(const HybridSpec& spec, const ReturnSeries& train);

/// Reuses an already estimated linear component.
HybridModel fit_hybrid(const FittedLinearModel& linear, const LearnerParams& learner, HybridMode mode,
                       std::size_t lag_n, std::span<const double> train);

/// Fits a caller-supplied (possibly custom) regressor as the nonlinear part.
HybridModel fit_hybrid(const FittedLinearModel& linear, std::unique_ptr<Regressor> learner, HybridMode mode,
                       std::size_t lag_n, std::span<const double> train);

/// out[t] forecasts x[t] from x[0..t-1] for max(from, min_history) <= t <= n;
/// every other entry is NaN. Length x.size() + 1.
std::vector<double> hybrid_forecasts(const HybridModel& m, std::span<const double> x, std::size_t from = 0);

/// Forecast of the value following `history`. Throws Error(TooShort).
double forecast_hybrid(const HybridModel& m, std::span<const double> history);
double forecast_hybrid(const HybridModel& m, const ReturnSeries& history);

/// A learner on lagged returns alone.
struct LearnerOnlyModel {
    std::shared_ptr<const Regressor> learner;
    std::size_t lag_n = 0;

    std::size_t min_history() const;
};

LearnerOnlyModel fit_learner_only(const LearnerParams& params, std::size_t lag_n, std::span<const double> train);
LearnerOnlyModel fit_learner_only(std::unique_ptr<Regressor> learner, std::size_t lag_n,
                                  std::span<const double> train);

/// Same layout as hybrid_forecasts.
std::vector<double> learner_forecasts(const LearnerOnlyModel& m, std::span<const double> x, std::size_t from = 0);

double forecast_learner(const LearnerOnlyModel& m, std::span<const double> history);

}  // namespace hybridcast
