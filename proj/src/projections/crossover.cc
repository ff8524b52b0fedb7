#include "snapsearch/projections/crossover.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "snapsearch/common/error.h"
#include "snapsearch/common/text_format.h"

namespace snapsearch {
namespace {

constexpr double kScanStep = 0.25;

}  // namespace

std::optional<CrossoverReport> crossover(const GrowthModel& capacity, const GrowthModel& demand,
                                         std::optional<YearRange> range) {
  const YearRange valid = intersect(capacity.range(), demand.range());
  const YearRange r = range ? intersect(*range, valid) : valid;
  if (!std::isfinite(r.first) || !std::isfinite(r.last)) throw ParameterError("crossover needs a bounded year range");
  if (!(r.last >= r.first)) throw ParameterError("empty crossover range");
  const auto covered = [&](double y) { return capacity(y) >= demand(y); };
  if (covered(r.first)) {
    throw ParameterError(capacity.name() + " already covers " + demand.name() + " at " + format_number(r.first));
  }
  double lo = r.first;
  for (int i = 1;; ++i) {
    const double y = std::min(r.first + i * kScanStep, r.last);
    if (covered(y)) {
      double hi = y;
      while (hi - lo > kCrossoverResolution) {
        const double mid = 0.5 * (lo + hi);
        (covered(mid) ? hi : lo) = mid;
      }
      return CrossoverReport{hi, capacity(hi), demand(hi)};
    }
    if (y >= r.last) return std::nullopt;
    lo = y;
  }
}

std::optional<CrossoverReport> sensitivity(double scale, const GrowthModel& capacity, const GrowthModel& demand,
                                           std::optional<YearRange> range) {
  if (!(scale > 0)) throw ParameterError("scale must be positive");
  if (scale == 1) return crossover(capacity, demand, range);
  return crossover(capacity, demand.scaled(scale), range);
}

void write_crossover_header(std::ostream& out) { out << "capacity_model,demand_model,scale,year\n"; }

void write_crossover_row(std::ostream& out, const std::string& capacity, const std::string& demand, double scale,
                         const std::optional<CrossoverReport>& report) {
  out << csv_field(capacity) << ',' << csv_field(demand) << ',' << format_number(scale) << ',';
  if (report) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", report->year);
    out << buf;
  }
  out << '\n';
}

}  // namespace snapsearch
