#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace chargeaudit {

// Calendar date without time zone. Source data carries dates only.
using Date = std::chrono::year_month_day;

/// Parses an ISO 8601 calendar date (YYYY-MM-DD). Returns nullopt on malformed
/// or impossible dates (e.g. 2017-02-30).
std::optional<Date> parse_date(std::string_view text);

std::string format_date(const Date& d);

/// Signed number of calendar days from `from` to `to`.
int days_between(const Date& from, const Date& to);

Date add_days(const Date& d, int days);

}  // namespace chargeaudit
