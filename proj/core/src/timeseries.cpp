#include "hybridcast/timeseries.hpp"

#include "hybridcast/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <utility>

namespace hybridcast {

namespace {

void check_increasing(const std::vector<Date>& dates) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (dates[i] <= dates[i - 1]) {
            throw Error(dates[i] == dates[i - 1] ? ErrorCode::DuplicateDate : ErrorCode::InvalidArgument,
                        "dates must strictly increase at " + format_date(dates[i]));
        }
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        fields.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return fields;
}

std::string line_tag(std::size_t line) { return "line " + std::to_string(line); }

}  // namespace

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<double> closes)
    : dates_(std::move(dates)), closes_(std::move(closes)) {
    if (dates_.size() != closes_.size()) {
        throw Error(ErrorCode::LengthMismatch, "dates and closes differ in length");
    }
    check_increasing(dates_);
    for (std::size_t i = 0; i < closes_.size(); ++i) {
        if (!(closes_[i] > 0.0) || !std::isfinite(closes_[i])) {
            throw Error(ErrorCode::NonPositivePrice, "close at " + format_date(dates_[i]) + " is not positive");
        }
    }
}

ReturnSeries::ReturnSeries(std::vector<Date> dates, std::vector<double> values)
    : dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) {
        throw Error(ErrorCode::LengthMismatch, "dates and values differ in length");
    }
    check_increasing(dates_);
}

std::size_t ReturnSeries::lower_bound(Date d) const {
    return static_cast<std::size_t>(std::lower_bound(dates_.begin(), dates_.end(), d) - dates_.begin());
}

ReturnSeries ReturnSeries::slice(std::size_t begin, std::size_t end) const {
    end = std::min(end, size());
    begin = std::min(begin, end);
    return ReturnSeries({dates_.begin() + begin, dates_.begin() + end}, {values_.begin() + begin, values_.begin() + end});
}

PriceSeries parse_price_csv(std::istream& in, const CsvSpec& spec) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t date_col = 0;
    std::size_t close_col = 0;
    bool have_header = false;

    while (!have_header && std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto header = split(line, spec.delimiter);
        const auto find = [&](const std::string& name) {
            for (std::size_t i = 0; i < header.size(); ++i) {
                std::string lowered(header[i]);
                std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                if (lowered == name) {
                    return i;
                }
            }
            throw Error(ErrorCode::MalformedRow, line_tag(line_no) + ": header lacks column '" + name + "'");
        };
        date_col = find(spec.date_column);
        close_col = find(spec.close_column);
        have_header = true;
    }
    if (!have_header) {
        throw Error(ErrorCode::EmptyFile, "no header line");
    }

    std::vector<std::pair<Date, double>> rows;
    std::vector<std::size_t> row_lines;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(line, spec.delimiter);
        if (fields.size() <= std::max(date_col, close_col)) {
            throw Error(ErrorCode::MalformedRow, line_tag(line_no) + ": too few fields");
        }
        Date date;
        try {
            date = parse_date(fields[date_col]);
        } catch (const Error&) {
            throw Error(ErrorCode::MalformedRow, line_tag(line_no) + ": bad date '" + std::string(fields[date_col]) + "'");
        }
        const auto text = fields[close_col];
        double close = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), close);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(close)) {
            throw Error(ErrorCode::MalformedRow, line_tag(line_no) + ": bad close '" + std::string(text) + "'");
        }
        if (close <= 0.0) {
            throw Error(ErrorCode::NonPositivePrice, line_tag(line_no) + ": close " + std::string(text));
        }
        rows.emplace_back(date, close);
        row_lines.push_back(line_no);
    }
    if (rows.empty()) {
        throw Error(ErrorCode::EmptyFile, "no data rows");
    }

    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Date> dates;
    std::vector<double> closes;
    dates.reserve(rows.size());
    closes.reserve(rows.size());
    for (const auto& [d, c] : rows) {
        if (!dates.empty() && dates.back() == d) {
            throw Error(ErrorCode::DuplicateDate, format_date(d));
        }
        dates.push_back(d);
        closes.push_back(c);
    }
    return PriceSeries(std::move(dates), std::move(closes));
}

PriceSeries ingest_csv(const std::filesystem::path& path, const CsvSpec& spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    try {
        return parse_price_csv(in, spec);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

ReturnSeries log_returns(const PriceSeries& prices) {
    if (prices.size() < 2) {
        throw Error(ErrorCode::TooShort, "log returns need at least two prices");
    }
    const auto& p = prices.closes();
    std::vector<double> r(p.size() - 1);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        r[i] = std::log(p[i + 1]) - std::log(p[i]);
    }
    return ReturnSeries({prices.dates().begin() + 1, prices.dates().end()}, std::move(r));
}

ReturnSeries simple_returns(const PriceSeries& prices) {
    if (prices.size() < 2) {
        throw Error(ErrorCode::TooShort, "simple returns need at least two prices");
    }
    const auto& p = prices.closes();
    std::vector<double> r(p.size() - 1);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        r[i] = p[i + 1] / p[i] - 1.0;
    }
    return ReturnSeries({prices.dates().begin() + 1, prices.dates().end()}, std::move(r));
}

double quantile_sorted(std::span<const double> sorted, double prob) {
    if (sorted.empty()) {
        throw Error(ErrorCode::TooShort, "quantile of empty data");
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

DescriptiveStats describe(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw Error(ErrorCode::TooShort, "statistics need at least two values");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    DescriptiveStats s;
    s.count = n;
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    // Summation over the sorted copy makes the result independent of input order.
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : sorted) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double nn = static_cast<double>(n);
    s.std = std::sqrt(m2 / (nn - 1.0));
    m2 /= nn;
    m3 /= nn;
    m4 /= nn;

    if (m2 == 0.0) {
        s.skewness = 0.0;
        s.kurtosis = 0.0;
        return s;
    }
    const double g1 = m3 / std::pow(m2, 1.5);
    s.skewness = n > 2 ? g1 * std::sqrt(nn * (nn - 1.0)) / (nn - 2.0) : std::nan("");
    const double g2 = m4 / (m2 * m2) - 3.0;
    s.kurtosis = n > 3 ? ((nn + 1.0) * g2 + 6.0) * (nn - 1.0) / ((nn - 2.0) * (nn - 3.0)) : std::nan("");
    return s;
}

}  // namespace hybridcast
