#include "hybridcast/date.hpp"

#include "hybridcast/error.hpp"

#include <charconv>
#include <cstdio>

namespace hybridcast {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::MisalignedForecast: return "MisalignedForecast";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InsufficientSpan: return "InsufficientSpan";
    case ErrorCode::AllCandidatesFailed: return "AllCandidatesFailed";
    case ErrorCode::MisalignedSeries: return "MisalignedSeries";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

namespace {

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) {
        return false;
    }
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

Date parse_date(std::string_view text) {
    using namespace std::chrono;
    int y = 0;
    int m = 0;
    int d = 0;
    const bool shaped = text.size() == 10 && text[4] == '-' && text[7] == '-';
    if (!shaped || !parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
        !parse_int(text.substr(8, 2), d)) {
        throw Error(ErrorCode::InvalidArgument, "not an ISO-8601 date: '" + std::string(text) + "'");
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw Error(ErrorCode::InvalidArgument, "invalid calendar date: '" + std::string(text) + "'");
    }
    return sys_days{ymd};
}

std::string format_date(Date d) {
    using namespace std::chrono;
    const year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Date add_months(Date d, int months) {
    using namespace std::chrono;
    const year_month_day ymd{d};
    const year_month shifted = year_month{ymd.year(), ymd.month()} + std::chrono::months{months};
    const auto last = year_month_day_last{shifted.year(), month_day_last{shifted.month()}}.day();
    const day dd = ymd.day() > last ? last : ymd.day();
    return sys_days{year_month_day{shifted.year(), shifted.month(), dd}};
}

}  // namespace hybridcast
