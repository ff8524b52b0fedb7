#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "snapsearch/projections/growth.h"

namespace snapsearch {

struct CrossoverReport {
  double year = 0;
  double capacity = 0;
  double demand = 0;
};

inline constexpr double kCrossoverResolution = 0.01;  // years

// First year in `range` (default: where both models are valid) at which
// capacity >= demand, bisected to kCrossoverResolution. nullopt if capacity
// never catches up. Throws ParameterError if capacity already covers demand
// at the start of the range or the range is empty.
std::optional<CrossoverReport> crossover(const GrowthModel& capacity, const GrowthModel& demand,
                                         std::optional<YearRange> range = std::nullopt);

// Demand multiplied by `scale` before solving. Throws ParameterError if
// scale <= 0.
std::optional<CrossoverReport> sensitivity(double scale, const GrowthModel& capacity, const GrowthModel& demand,
                                           std::optional<YearRange> range = std::nullopt);

void write_crossover_header(std::ostream& out);
// "capacity_model,demand_model,scale,year"; year is empty with no crossing.
void write_crossover_row(std::ostream& out, const std::string& capacity, const std::string& demand, double scale,
                         const std::optional<CrossoverReport>& report);

}  // namespace snapsearch
