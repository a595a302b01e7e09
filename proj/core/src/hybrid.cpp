#include "hybridcast/hybrid.hpp"

#include "hybridcast/error.hpp"

#include <cmath>
#include <limits>

namespace hybridcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// First target index with a full lag window in the series the learner reads.
std::size_t first_target(const FittedLinearModel& linear, HybridMode mode, std::size_t lag_n) {
    const std::size_t w = linear.warmup();
    return mode == HybridMode::Residual ? w + lag_n : std::max(w, lag_n);
}

std::vector<double> residual_series(std::span<const double> x, std::span<const double> fitted, std::size_t w) {
    std::vector<double> e(x.size(), kNaN);
    for (std::size_t t = w; t < x.size(); ++t) {
        e[t] = x[t] - fitted[t];
    }
    return e;
}

void check_lag(std::size_t lag_n) {
    if (lag_n == 0) {
        throw Error(ErrorCode::InvalidArgument, "lag count must be positive");
    }
}

// Predictions for targets [begin, n] of the lagged design over `y` (with
// optional series-indexed extra column); `context` earlier rows are included.
std::vector<double> predict_range(const Regressor& learner, std::span<const double> y, std::size_t lag_n,
                                  std::span<const double> extra, std::size_t first_row, std::size_t begin,
                                  std::vector<double> out) {
    const std::size_t n = y.size();
    const std::size_t context = learner.context_rows();
    const std::size_t start = std::max(begin, first_row + context - 1);
    if (start > n) {
        return out;
    }
    const std::size_t first = start + 1 - context;
    const FeatureMatrix fm = lag_rows(y, lag_n, extra, first, n);
    for (std::size_t t = start; t <= n; ++t) {
        out[t] = learner.predict(fm, t - first);
    }
    return out;
}

}  // namespace

std::string hybrid_label(LinearKind linear, LearnerKind learner, HybridMode mode) {
    return std::string(to_string(learner)) + "-" + to_string(linear) + " (" +
           std::to_string(static_cast<int>(mode)) + ")";
}

std::size_t HybridModel::min_history() const {
    const std::size_t context = nonlinear ? nonlinear->context_rows() : 1;
    return first_target(linear, mode, lag_n) + context - 1;
}

std::size_t LearnerOnlyModel::min_history() const {
    const std::size_t context = learner ? learner->context_rows() : 1;
    return lag_n + context - 1;
}

FittedLinearModel fit_linear(LinearKind kind, std::span<const double> x, const OrderBounds& bounds,
                             const ArfimaOptions& arfima) {
    return kind == LinearKind::Arima ? fit_arima(x, bounds) : fit_arfima(x, bounds, arfima);
}

FeatureMatrix hybrid_training_matrix(const FittedLinearModel& linear, HybridMode mode, std::size_t lag_n,
                                     std::span<const double> x) {
    check_lag(lag_n);
    const std::size_t first = first_target(linear, mode, lag_n);
    if (x.size() <= first) {
        throw Error(ErrorCode::TooShort, "training series of " + std::to_string(x.size()) +
                                             " values is too short for the hybrid lag structure");
    }
    const std::vector<double> fitted = one_step_forecasts(linear, x);
    if (mode == HybridMode::Residual) {
        const std::vector<double> e = residual_series(x, fitted, linear.warmup());
        return lag_rows(e, lag_n, {}, first, x.size() - 1);
    }
    return lag_rows(x, lag_n, fitted, first, x.size() - 1);
}

HybridModel fit_hybrid(const FittedLinearModel& linear, std::unique_ptr<Regressor> learner, HybridMode mode,
                       std::size_t lag_n, std::span<const double> train) {
    if (!learner) {
        throw Error(ErrorCode::InvalidArgument, "hybrid requires a learner");
    }
    const FeatureMatrix fm = hybrid_training_matrix(linear, mode, lag_n, train);
    learner->fit(fm);
    HybridModel m;
    m.linear = linear;
    m.nonlinear = std::shared_ptr<const Regressor>(std::move(learner));
    m.mode = mode;
    m.lag_n = lag_n;
    return m;
}

HybridModel fit_hybrid(const FittedLinearModel& linear, const LearnerParams& learner, HybridMode mode,
                       std::size_t lag_n, std::span<const double> train) {
    return fit_hybrid(linear, make_regressor(learner), mode, lag_n, train);
}

HybridModel fit_hybrid(const HybridSpec& spec, std::span<const double> train) {
    const FittedLinearModel linear = fit_linear(spec.linear_kind, train, spec.bounds, spec.arfima);
    return fit_hybrid(linear, spec.learner, spec.mode, spec.lag_n, train);
}

HybridModel fit_hybrid(const HybridSpec& spec, const ReturnSeries& train) { return fit_hybrid(spec, train.values()); }

std::vector<double> hybrid_forecasts(const HybridModel& m, std::span<const double> x, std::size_t from) {
    if (!m.nonlinear) {
        throw Error(ErrorCode::InvalidArgument, "hybrid model has no learner");
    }
    const std::vector<double> lin = one_step_forecasts(m.linear, x);
    std::vector<double> out(x.size() + 1, kNaN);
    const std::size_t first = first_target(m.linear, m.mode, m.lag_n);
    if (m.mode == HybridMode::Residual) {
        const std::vector<double> e = residual_series(x, lin, m.linear.warmup());
        out = predict_range(*m.nonlinear, e, m.lag_n, {}, first, from, std::move(out));
        for (std::size_t t = 0; t < out.size(); ++t) {
            out[t] += lin[t];
        }
        return out;
    }
    return predict_range(*m.nonlinear, x, m.lag_n, lin, first, from, std::move(out));
}

double forecast_hybrid(const HybridModel& m, std::span<const double> history) {
    if (history.size() < m.min_history()) {
        throw Error(ErrorCode::TooShort, "history of " + std::to_string(history.size()) + " values; hybrid needs " +
                                             std::to_string(m.min_history()));
    }
    return hybrid_forecasts(m, history, history.size()).back();
}

double forecast_hybrid(const HybridModel& m, const ReturnSeries& history) {
    return forecast_hybrid(m, std::span<const double>(history.values()));
}

LearnerOnlyModel fit_learner_only(std::unique_ptr<Regressor> learner, std::size_t lag_n,
                                  std::span<const double> train) {
    check_lag(lag_n);
    if (!learner) {
        throw Error(ErrorCode::InvalidArgument, "learner required");
    }
    if (train.size() <= lag_n) {
        throw Error(ErrorCode::TooShort, "training series is shorter than the lag count");
    }
    learner->fit(make_lag_features(train, lag_n));
    LearnerOnlyModel m;
    m.learner = std::shared_ptr<const Regressor>(std::move(learner));
    m.lag_n = lag_n;
    return m;
}

LearnerOnlyModel fit_learner_only(const LearnerParams& params, std::size_t lag_n, std::span<const double> train) {
    return fit_learner_only(make_regressor(params), lag_n, train);
}

std::vector<double> learner_forecasts(const LearnerOnlyModel& m, std::span<const double> x, std::size_t from) {
    if (!m.learner) {
        throw Error(ErrorCode::InvalidArgument, "model has no learner");
    }
    return predict_range(*m.learner, x, m.lag_n, {}, m.lag_n, from, std::vector<double>(x.size() + 1, kNaN));
}

double forecast_learner(const LearnerOnlyModel& m, std::span<const double> history) {
    if (history.size() < m.min_history()) {
        throw Error(ErrorCode::TooShort, "history of " + std::to_string(history.size()) + " values; learner needs " +
                                             std::to_string(m.min_history()));
    }
    return learner_forecasts(m, history, history.size()).back();
}

}  // namespace hybridcast
