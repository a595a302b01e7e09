#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace hybridcast {

using Date = std::chrono::sys_days;

/// Parses `YYYY-MM-DD`; throws Error(InvalidArgument) on anything else.
Date parse_date(std::string_view text);

std::string format_date(Date d);

/// Calendar-month shift. Days past the end of the target month clamp to its last day.
Date add_months(Date d, int months);

/// Half-open calendar interval [begin, end).
struct DateRange {
    Date begin;
    Date end;

    bool contains(Date d) const noexcept { return begin <= d && d < end; }
    bool empty() const noexcept { return end <= begin; }
};

inline double years_between(Date from, Date to) {
    return static_cast<double>((to - from).count()) / 365.25;
}

}  // namespace hybridcast
