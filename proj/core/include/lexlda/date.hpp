#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace lexlda {

using Date = std::chrono::year_month_day;

// Strict "YYYY-MM-DD"; throws Error on malformed or impossible dates.
Date parse_date(std::string_view text);
std::string format_date(Date date);

// Calendar month, e.g. for synthetic date ranges and trend buckets.
struct YearMonth {
  int year = 1970;
  unsigned month = 1;  // 1..12

  auto operator<=>(const YearMonth&) const = default;

  // Months since year 0; handy for ranges.
  int ordinal() const { return year * 12 + static_cast<int>(month) - 1; }
  static YearMonth from_ordinal(int ordinal) {
    return {ordinal / 12, static_cast<unsigned>(ordinal % 12) + 1};
  }
};

// Strict "YYYY-MM".
YearMonth parse_year_month(std::string_view text);
std::string format_year_month(YearMonth ym);

}  // namespace lexlda
