#pragma once

#include "hybridcast/date.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hybridcast {

/// Daily closing prices. Dates strictly increase and every close is positive.
class PriceSeries {
public:
    PriceSeries() = default;
    PriceSeries(std::vector<Date> dates, std::vector<double> closes);

    std::size_t size() const noexcept { return closes_.size(); }
    bool empty() const noexcept { return closes_.empty(); }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& closes() const noexcept { return closes_; }

private:
    std::vector<Date> dates_;
    std::vector<double> closes_;
};

/// A dated real-valued series; used for log returns, simple returns and
/// out-of-sample forecasts alike. Dates strictly increase.
class ReturnSeries {
public:
    ReturnSeries() = default;
    ReturnSeries(std::vector<Date> dates, std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Index of the first element dated on or after `d` (size() when none).
    std::size_t lower_bound(Date d) const;

    ReturnSeries slice(std::size_t begin, std::size_t end) const;

private:
    std::vector<Date> dates_;
    std::vector<double> values_;
};

struct DescriptiveStats {
    std::size_t count = 0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double std = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;  // excess
};

struct CsvSpec {
    std::string date_column = "date";
    std::string close_column = "close";
    char delimiter = ',';
};

PriceSeries ingest_csv(const std::filesystem::path& path, const CsvSpec& spec = {});
PriceSeries parse_price_csv(std::istream& in, const CsvSpec& spec = {});

/// r_t = ln P_t - ln P_{t-1}, dated at the later day.
ReturnSeries log_returns(const PriceSeries& prices);

/// R_t = P_t / P_{t-1} - 1, dated at the later day.
ReturnSeries simple_returns(const PriceSeries& prices);

/// Sample statistics: type-7 quartiles, n-1 standard deviation, adjusted
/// Fisher-Pearson skewness and bias-corrected excess kurtosis.
DescriptiveStats describe(std::span<const double> values);
inline DescriptiveStats describe(const ReturnSeries& r) { return describe(r.values()); }

/// Type-7 (linear interpolation) quantile of already sorted data.
double quantile_sorted(std::span<const double> sorted, double prob);

}  // namespace hybridcast
