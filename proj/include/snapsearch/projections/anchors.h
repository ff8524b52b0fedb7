#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace snapsearch {

struct Anchor {
  double year = 0;
  double value = 0;
  std::string citation;
};

// Dated data points, years strictly increasing.
class AnchorTable {
 public:
  // Throws ParameterError for an empty table, unsorted or repeated years, or
  // non-finite numbers.
  explicit AnchorTable(std::vector<Anchor> points);

  const std::vector<Anchor>& points() const { return points_; }
  double first_year() const { return points_.front().year; }
  double last_year() const { return points_.back().year; }
  // Value at an anchor year, or throws RangeError.
  double at(double year) const;
  // Piecewise-linear; RangeError outside [first_year, last_year].
  double interpolate(double year) const;

 private:
  std::vector<Anchor> points_;
};

// CSV with a "year,value,citation" header. The citation is the rest of the
// line and may contain commas. Throws ParseError with the line number.
AnchorTable parse_anchor_csv(std::string_view text);
AnchorTable load_anchor_csv(const std::filesystem::path& path);

// Tables shipped in data/: population, internet_users, page_size, us_users,
// searches, sites, disk, sd_card, archive_pages. Throws ParameterError.
const AnchorTable& builtin_anchors(std::string_view name);
std::vector<std::string> builtin_anchor_names();

}  // namespace snapsearch
