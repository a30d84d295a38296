#include "lexlda/date.hpp"

#include <charconv>
#include <cstdio>

#include "lexlda/error.hpp"

namespace lexlda {
namespace {

bool parse_digits(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return ec == std::errc{};
}

}  // namespace

Date parse_date(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_digits(text, 0, 4, y) || !parse_digits(text, 5, 2, m) ||
      !parse_digits(text, 8, 2, d)) {
    throw Error("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  }
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw Error("invalid calendar date '" + std::string(text) + "'");
  return date;
}

std::string format_date(Date date) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

YearMonth parse_year_month(std::string_view text) {
  int y = 0, m = 0;
  if (text.size() != 7 || text[4] != '-' || !parse_digits(text, 0, 4, y) ||
      !parse_digits(text, 5, 2, m) || m < 1 || m > 12) {
    throw Error("malformed month '" + std::string(text) + "' (expected YYYY-MM)");
  }
  return {y, static_cast<unsigned>(m)};
}

std::string format_year_month(YearMonth ym) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u", ym.year, ym.month);
  return buf;
}

}  // namespace lexlda
