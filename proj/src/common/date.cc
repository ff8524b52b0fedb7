#include "snapsearch/common/date.h"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "snapsearch/common/error.h"

namespace snapsearch {
namespace {

namespace chr = std::chrono;

constexpr chr::sys_days kEpochDays = chr::sys_days{chr::year{1990} / chr::January / 1};

chr::year_month_day to_ymd(Date d) { return chr::year_month_day{kEpochDays + chr::days{d.days()}}; }

bool parse_digits(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) {
    throw ParseError("invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) +
                     "-" + std::to_string(day));
  }
  return Date(static_cast<std::int32_t>((chr::sys_days{ymd} - kEpochDays).count()));
}

Date Date::parse(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_digits(text.substr(0, 4), y) ||
      !parse_digits(text.substr(5, 2), m) || !parse_digits(text.substr(8, 2), d)) {
    throw ParseError("expected date YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

int Date::year() const { return static_cast<int>(to_ymd(*this).year()); }

double Date::fractional_year() const {
  const int y = year();
  const Date start = from_ymd(y, 1, 1);
  const Date next = from_ymd(y + 1, 1, 1);
  return y + static_cast<double>(days_ - start.days_) / static_cast<double>(next.days_ - start.days_);
}

std::string Date::to_string() const {
  const auto ymd = to_ymd(*this);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

bool Date::in_corpus_range() const { return *this >= min_corpus_date() && *this <= max_corpus_date(); }

Date min_corpus_date() { return kEpoch; }

Date max_corpus_date() {
  static const Date d = Date::from_ymd(2100, 12, 31);
  return d;
}

}  // namespace snapsearch
