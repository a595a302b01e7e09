#include "hybridcast/learners/features.hpp"

#include "hybridcast/error.hpp"

#include <limits>

namespace hybridcast {

FeatureMatrix make_lag_features(std::span<const double> y, std::size_t n,
                                std::optional<std::span<const double>> linear_forecast) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "lag count must be positive");
    }
    if (y.size() <= n) {
        throw Error(ErrorCode::TooShort, "series must be longer than the lag count");
    }
    const std::size_t rows = y.size() - n;
    if (linear_forecast && linear_forecast->size() != rows) {
        throw Error(ErrorCode::MisalignedForecast, "linear forecast has " + std::to_string(linear_forecast->size()) +
                                                       " values for " + std::to_string(rows) + " targets");
    }
    FeatureMatrix fm;
    fm.rows = rows;
    fm.cols = n + (linear_forecast ? 1 : 0);
    fm.data.resize(fm.rows * fm.cols);
    fm.target.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + n;
        auto row = fm.row(r);
        for (std::size_t k = 1; k <= n; ++k) {
            row[k - 1] = y[t - k];
        }
        if (linear_forecast) {
            row[n] = (*linear_forecast)[r];
        }
        fm.target[r] = y[t];
    }
    return fm;
}

FeatureMatrix lag_rows(std::span<const double> y, std::size_t n, std::span<const double> extra, std::size_t first,
                       std::size_t last) {
    if (first < n || last > y.size() || first > last) {
        throw Error(ErrorCode::TooShort, "lag rows out of range");
    }
    const bool with_extra = !extra.empty();
    if (with_extra && extra.size() <= last) {
        throw Error(ErrorCode::MisalignedForecast, "extra column shorter than requested rows");
    }
    FeatureMatrix fm;
    fm.rows = last - first + 1;
    fm.cols = n + (with_extra ? 1 : 0);
    fm.data.resize(fm.rows * fm.cols);
    fm.target.resize(fm.rows);
    for (std::size_t r = 0; r < fm.rows; ++r) {
        const std::size_t t = first + r;
        auto row = fm.row(r);
        for (std::size_t k = 1; k <= n; ++k) {
            row[k - 1] = y[t - k];
        }
        if (with_extra) {
            row[n] = extra[t];
        }
        fm.target[r] = t < y.size() ? y[t] : std::numeric_limits<double>::quiet_NaN();
    }
    return fm;
}

}  // namespace hybridcast
