#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hybridcast {

/// Row-major design matrix with an aligned target vector.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;
    std::vector<double> target;

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
};

/// Row t holds [y_{t-1}, ..., y_{t-n}] (plus linear_forecast[t - n] when
/// given) with target y_t, for t = n .. y.size()-1.
FeatureMatrix make_lag_features(std::span<const double> y, std::size_t n,
                                std::optional<std::span<const double>> linear_forecast = std::nullopt);

/// Rows for targets t in [first, last] where t may equal y.size() (the
/// unseen next value, target NaN). `extra`, when non-empty, is indexed by
/// series position and supplies the trailing column.
FeatureMatrix lag_rows(std::span<const double> y, std::size_t n, std::span<const double> extra, std::size_t first,
                       std::size_t last);

/// Per-column affine normalisation fitted on training rows only.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const FeatureMatrix& x);
    void apply(std::span<const double> in, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> in) const;
    std::size_t dims() const noexcept { return mean.size(); }
};

/// Mean and (population) scale of a target vector; scale 1 when degenerate.
struct TargetScaler {
    double mean = 0.0;
    double scale = 1.0;
    bool degenerate = false;

    static TargetScaler fit(std::span<const double> y);
};

}  // namespace hybridcast
