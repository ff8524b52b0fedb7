#pragma once

#include <string_view>
#include <vector>

#include "snapsearch/projections/growth.h"

namespace snapsearch {

inline constexpr double kDefaultCreationRate = 2.0;  // pages per person per Internet year
inline constexpr double kMediaFactor = 14.0;          // full page bytes over text bytes
inline constexpr double kIndexRatioLarge = 0.11;
inline constexpr double kIndexRatioSmall = 0.02;
inline constexpr double kSiteRenewalLow = 0.70;
inline constexpr double kSiteRenewalHigh = 0.77;

// Persons; piecewise linear over the population table, 1950..2050.
double population(double year);
// Persons; cubic through 0 at 1990 and population(2050) at 2050, fitted to the
// user table and clamped to [0, population(year)]. 1990..2050.
double internet_users(double year);
const GrowthModel& internet_users_model();

// Running sum of users(y) over whole years first_year..floor(year); a
// fractional year adds that part of the next year's users.
double human_internet_years(const GrowthModel& users, double year, double first_year = 1990);
double human_internet_years(double year);

double pages(double year, double creation_rate = kDefaultCreationRate);
// Observed archive size over modelled human Internet years, per archive anchor.
std::vector<Anchor> observed_creation_rates();

// Bytes; least-squares line through the page size table. 1997..2050.
double page_size(double year);
const GrowthModel& page_size_model();

double web_text_size(double year);
double web_full_size(double year, double media_factor = kMediaFactor);
// Throws ParameterError unless 0 < ratio < 1.
double index_size(double year, double ratio);

enum class Device { kDisk, kSdCard };
enum class CapacityCurve {
  kDisk18Month,    // doubling every 18 months from the 1981 anchor (default)
  kDiskAnchorFit,  // exponential through the 1981 and 2011 anchors
  kSdProjected,    // doubling yearly through the 2035 anchor (default)
  kSdRetail,       // doubling yearly from the 2011 retail card
};

const GrowthModel& capacity_model(CapacityCurve curve);
// Default curve per device. Disk from 1981, SD from 2000.
double device_capacity(double year, Device device);

enum class BandwidthModel { kIeeeTrend, kNielsen };
const GrowthModel& bandwidth_model(BandwidthModel model);
// Bytes per second, from 1990.
double bandwidth(double year, BandwidthModel model);
// Throws ParameterError for a negative payload.
double transfer_time(double bytes, double year, BandwidthModel model);

// US searches per month, from 2005.
double searches_per_month(double year);
double searches_per_user(double year);
// Web sites, from 2004.
double sites(double year);

struct BroadcastFeasibility {
  double year = 0;
  double creation_bytes = 0;      // per day
  double modification_bytes = 0;  // per day
  double daily_bytes = 0;
  double ieee_daily_capacity = 0;
  double nielsen_daily_capacity = 0;
  bool feasible_ieee = false;
  bool feasible_nielsen = false;
};

// Daily bytes of new and modified pages against a day of each bandwidth model.
BroadcastFeasibility broadcast_feasible(double year, double modification_factor = 1.0,
                                        double creation_rate = kDefaultCreationRate);

// Resolves a series name to a model:
//   population, internet_users, hiy, pages, page_size, searches,
//   searches_per_user, sites, text, full, index@R, text+index[@R],
//   disk, disk-fit, sd, sd-retail, bandwidth-ieee, bandwidth-nielsen.
// Throws ParameterError for an unknown name or a bad ratio.
GrowthModel named_series(std::string_view name);
std::vector<std::string> series_names();

}  // namespace snapsearch
