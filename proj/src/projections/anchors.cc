#include "snapsearch/projections/anchors.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "snapsearch/common/error.h"

namespace snapsearch {

// Generated at configure time from data/*.csv.
extern const std::map<std::string, std::string_view, std::less<>> kAnchorCsv;

namespace {

double parse_number(std::string_view field, std::uint64_t line) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
  double v = 0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || end != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(field) + "'", line);
  }
  return v;
}

}  // namespace

AnchorTable::AnchorTable(std::vector<Anchor> points) : points_(std::move(points)) {
  if (points_.empty()) throw ParameterError("anchor table is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].year) || !std::isfinite(points_[i].value)) {
      throw ParameterError("anchor " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(points_[i].year > points_[i - 1].year)) {
      throw ParameterError("anchor years must be strictly increasing");
    }
  }
}

double AnchorTable::at(double year) const {
  for (const Anchor& a : points_) {
    if (a.year == year) return a.value;
  }
  throw RangeError("no anchor at year " + std::to_string(year));
}

double AnchorTable::interpolate(double year) const {
  if (!(year >= first_year() && year <= last_year())) {
    throw RangeError("year " + std::to_string(year) + " outside anchors " + std::to_string(first_year()) + ".." +
                     std::to_string(last_year()));
  }
  auto hi = std::lower_bound(points_.begin(), points_.end(), year,
                             [](const Anchor& a, double y) { return a.year < y; });
  if (hi->year == year) return hi->value;
  auto lo = hi - 1;
  const double t = (year - lo->year) / (hi->year - lo->year);
  return lo->value + t * (hi->value - lo->value);
}

AnchorTable parse_anchor_csv(std::string_view text) {
  std::vector<Anchor> points;
  std::uint64_t line_number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_number == 1) {
      if (line != "year,value,citation") throw ParseError("line 1: expected header year,value,citation", 1);
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_number) + ": expected year,value,citation", line_number);
    }
    Anchor a;
    a.year = parse_number(line.substr(0, c1), line_number);
    a.value = parse_number(line.substr(c1 + 1, c2 - c1 - 1), line_number);
    a.citation = std::string(line.substr(c2 + 1));
    if (a.citation.empty()) throw ParseError("line " + std::to_string(line_number) + ": missing citation", line_number);
    if (!points.empty() && !(a.year > points.back().year)) {
      throw ParseError("line " + std::to_string(line_number) + ": years must increase", line_number);
    }
    points.push_back(std::move(a));
  }
  if (points.empty()) throw ParseError("anchor file has no data rows");
  return AnchorTable(std::move(points));
}

AnchorTable load_anchor_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open anchor file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_anchor_csv(text.str());
}

const AnchorTable& builtin_anchors(std::string_view name) {
  static const std::map<std::string, AnchorTable, std::less<>> tables = [] {
    std::map<std::string, AnchorTable, std::less<>> out;
    for (const auto& [n, csv] : kAnchorCsv) out.emplace(n, parse_anchor_csv(csv));
    return out;
  }();
  auto it = tables.find(name);
  if (it == tables.end()) throw ParameterError("no built-in anchor table '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> builtin_anchor_names() {
  std::vector<std::string> names;
  for (const auto& [n, csv] : kAnchorCsv) names.push_back(n);
  return names;
}

}  // namespace snapsearch
