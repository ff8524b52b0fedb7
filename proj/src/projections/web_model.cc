#include "snapsearch/projections/web_model.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "snapsearch/common/error.h"

namespace snapsearch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUsersStart = 1990;
constexpr double kUsersEnd = 2050;
constexpr double kIeeeBase = 1.25e6;        // bytes/s in 1990 (10 Mb/s Ethernet)
constexpr double kNielsen2050 = 42e15 / 8;  // 42 Pb/s
constexpr double kSecondsPerDay = 86400;
constexpr double kDaysPerYear = 365;

const GrowthModel& population_model() {
  static const GrowthModel m = GrowthModel::interpolated(builtin_anchors("population")).renamed("population");
  return m;
}

const GrowthModel& us_users_model() {
  static const GrowthModel m = GrowthModel::interpolated(builtin_anchors("us_users")).renamed("us_users");
  return m;
}

const GrowthModel& searches_model() {
  static const GrowthModel m =
      GrowthModel::fit_linear(builtin_anchors("searches"), {2005, kInf}).renamed("searches");
  return m;
}

const GrowthModel& sites_model() {
  static const GrowthModel m = GrowthModel::fit_linear(builtin_anchors("sites"), {2004, kInf}).renamed("sites");
  return m;
}

double parse_ratio(std::string_view text) {
  double r = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), r);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParameterError("bad index ratio '" + std::string(text) + "'");
  }
  if (!(r > 0 && r < 1)) throw ParameterError("index ratio must be in (0, 1)");
  return r;
}

}  // namespace

double population(double year) { return population_model()(year); }

const GrowthModel& internet_users_model() {
  static const GrowthModel m = [] {
    const GrowthModel cubic = GrowthModel::fit_cubic_sigmoid(kUsersStart, kUsersEnd, population(kUsersEnd),
                                                             builtin_anchors("internet_users"));
    return GrowthModel::custom(
        "internet_users", [cubic](double y) { return std::clamp(cubic(y), 0.0, population(y)); },
        {kUsersStart, kUsersEnd});
  }();
  return m;
}

double internet_users(double year) { return internet_users_model()(year); }

double human_internet_years(const GrowthModel& users, double year, double first_year) {
  if (!(year >= first_year)) throw RangeError("human Internet years start in " + std::to_string(first_year));
  const double whole = std::floor(year);
  double sum = 0;
  for (double y = first_year; y <= whole; y += 1) sum += users(y);
  if (year > whole) sum += (year - whole) * users(whole + 1);
  return sum;
}

double human_internet_years(double year) { return human_internet_years(internet_users_model(), year); }

double pages(double year, double creation_rate) { return creation_rate * human_internet_years(year); }

std::vector<Anchor> observed_creation_rates() {
  std::vector<Anchor> out;
  for (const Anchor& a : builtin_anchors("archive_pages").points()) {
    out.push_back({a.year, a.value / human_internet_years(a.year), a.citation});
  }
  return out;
}

const GrowthModel& page_size_model() {
  static const GrowthModel m =
      GrowthModel::fit_linear(builtin_anchors("page_size"), {1997, kUsersEnd}).renamed("page_size");
  return m;
}

double page_size(double year) { return page_size_model()(year); }

double web_text_size(double year) { return pages(year) * page_size(year); }

double web_full_size(double year, double media_factor) { return web_text_size(year) * media_factor; }

double index_size(double year, double ratio) {
  if (!(ratio > 0 && ratio < 1)) throw ParameterError("index ratio must be in (0, 1)");
  return ratio * web_text_size(year);
}

const GrowthModel& capacity_model(CapacityCurve curve) {
  static const GrowthModel disk18 =
      GrowthModel::doubling_every(1.5, 1981, builtin_anchors("disk").at(1981), {1981, kInf}).renamed("disk");
  static const GrowthModel disk_fit = [] {
    const auto& t = builtin_anchors("disk");
    const double period = (2011 - 1981) / std::log2(t.at(2011) / t.at(1981));
    return GrowthModel::doubling_every(period, 1981, t.at(1981), {1981, kInf}).renamed("disk-fit");
  }();
  static const GrowthModel sd =
      GrowthModel::doubling_every(1, 2035, builtin_anchors("sd_card").at(2035), {2000, kInf}).renamed("sd");
  static const GrowthModel sd_retail =
      GrowthModel::doubling_every(1, 2011, builtin_anchors("sd_card").at(2011), {2000, kInf}).renamed("sd-retail");
  switch (curve) {
    case CapacityCurve::kDisk18Month:
      return disk18;
    case CapacityCurve::kDiskAnchorFit:
      return disk_fit;
    case CapacityCurve::kSdProjected:
      return sd;
    case CapacityCurve::kSdRetail:
      return sd_retail;
  }
  throw ParameterError("unknown capacity curve");
}

double device_capacity(double year, Device device) {
  return capacity_model(device == Device::kDisk ? CapacityCurve::kDisk18Month : CapacityCurve::kSdProjected)(year);
}

const GrowthModel& bandwidth_model(BandwidthModel model) {
  static const GrowthModel ieee = GrowthModel::tenfold_every(5, 1990, kIeeeBase, {1990, kInf}).renamed("bandwidth-ieee");
  static const GrowthModel nielsen = GrowthModel::custom(
      "bandwidth-nielsen", [](double y) { return kNielsen2050 * std::pow(1.5, y - 2050); }, {1990, kInf});
  return model == BandwidthModel::kIeeeTrend ? ieee : nielsen;
}

double bandwidth(double year, BandwidthModel model) { return bandwidth_model(model)(year); }

double transfer_time(double bytes, double year, BandwidthModel model) {
  if (!(bytes >= 0)) throw ParameterError("payload must be non-negative");
  return bytes / bandwidth(year, model);
}

double searches_per_month(double year) { return searches_model()(year); }

double searches_per_user(double year) { return searches_per_month(year) / us_users_model()(year); }

double sites(double year) { return sites_model()(year); }

BroadcastFeasibility broadcast_feasible(double year, double modification_factor, double creation_rate) {
  if (!(modification_factor >= 0)) throw ParameterError("modification factor must be >= 0");
  if (!(creation_rate >= 0)) throw ParameterError("creation rate must be >= 0");
  BroadcastFeasibility r;
  r.year = year;
  const double created_pages = internet_users(year) * creation_rate / kDaysPerYear;
  r.creation_bytes = created_pages * page_size(year);
  r.modification_bytes = created_pages * modification_factor * page_size(year);
  r.daily_bytes = r.creation_bytes + r.modification_bytes;
  r.ieee_daily_capacity = bandwidth(year, BandwidthModel::kIeeeTrend) * kSecondsPerDay;
  r.nielsen_daily_capacity = bandwidth(year, BandwidthModel::kNielsen) * kSecondsPerDay;
  r.feasible_ieee = r.daily_bytes <= r.ieee_daily_capacity;
  r.feasible_nielsen = r.daily_bytes <= r.nielsen_daily_capacity;
  return r;
}

GrowthModel named_series(std::string_view name) {
  const YearRange web{1997, kUsersEnd};
  if (name == "population") return population_model();
  if (name == "internet_users") return internet_users_model();
  if (name == "hiy") return GrowthModel::custom("hiy", [](double y) { return human_internet_years(y); }, {kUsersStart, kUsersEnd});
  if (name == "pages") return GrowthModel::custom("pages", [](double y) { return pages(y); }, {kUsersStart, kUsersEnd});
  if (name == "page_size") return page_size_model();
  if (name == "searches") return searches_model();
  if (name == "searches_per_user") {
    return GrowthModel::custom("searches_per_user", [](double y) { return searches_per_user(y); }, {2005, kUsersEnd});
  }
  if (name == "sites") return sites_model();
  if (name == "text") return GrowthModel::custom("text", [](double y) { return web_text_size(y); }, web);
  if (name == "full") return GrowthModel::custom("full", [](double y) { return web_full_size(y); }, web);
  if (name.starts_with("index@")) {
    const double r = parse_ratio(name.substr(6));
    return GrowthModel::custom(std::string(name), [r](double y) { return index_size(y, r); }, web);
  }
  if (name == "text+index" || name.starts_with("text+index@")) {
    const double r = name == "text+index" ? kIndexRatioLarge : parse_ratio(name.substr(11));
    return GrowthModel::custom(std::string(name), [r](double y) { return web_text_size(y) * (1 + r); }, web);
  }
  if (name == "disk") return capacity_model(CapacityCurve::kDisk18Month);
  if (name == "disk-fit") return capacity_model(CapacityCurve::kDiskAnchorFit);
  if (name == "sd") return capacity_model(CapacityCurve::kSdProjected);
  if (name == "sd-retail") return capacity_model(CapacityCurve::kSdRetail);
  if (name == "bandwidth-ieee") return bandwidth_model(BandwidthModel::kIeeeTrend);
  if (name == "bandwidth-nielsen") return bandwidth_model(BandwidthModel::kNielsen);
  throw ParameterError("unknown series '" + std::string(name) + "'");
}

std::vector<std::string> series_names() {
  return {"population", "internet_users", "hiy",  "pages",     "page_size", "searches",
          "searches_per_user", "sites", "text", "full", "index@0.11", "index@0.02",
          "text+index", "disk", "disk-fit", "sd", "sd-retail", "bandwidth-ieee", "bandwidth-nielsen"};
}

}  // namespace snapsearch
