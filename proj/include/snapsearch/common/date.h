#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace snapsearch {

// A calendar date with whole-day resolution, stored as days since 1990-01-01.
class Date {
 public:
  constexpr Date() = default;

  static constexpr Date from_days(std::int32_t days_since_epoch) { return Date(days_since_epoch); }
  // Throws ParseError for an impossible calendar date.
  static Date from_ymd(int year, unsigned month, unsigned day);
  // Strict "YYYY-MM-DD". Throws ParseError.
  static Date parse(std::string_view text);

  constexpr std::int32_t days() const { return days_; }
  int year() const;
  // Year as a real number, e.g. 2025-07-02 is about 2025.5.
  double fractional_year() const;
  std::string to_string() const;

  // Corpus dates must fall within [1990-01-01, 2100-12-31].
  bool in_corpus_range() const;

  constexpr Date plus_days(std::int32_t n) const { return Date(days_ + n); }
  constexpr std::int32_t days_until(Date later) const { return later.days_ - days_; }

  constexpr auto operator<=>(const Date&) const = default;

 private:
  constexpr explicit Date(std::int32_t days) : days_(days) {}
  std::int32_t days_ = 0;
};

inline constexpr Date kEpoch = Date::from_days(0);
Date min_corpus_date();
Date max_corpus_date();

}  // namespace snapsearch
