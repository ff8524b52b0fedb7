#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "snapsearch/common/date.h"
#include "snapsearch/datacentre/topology.h"

namespace snapsearch {

// Snapshot dates of a device fleet with the share of clients on each.
class FleetDistribution {
 public:
  // Weights must be positive and sum to 1 within 1e-12 (ParameterError).
  explicit FleetDistribution(std::vector<std::pair<Date, double>> entries);
  // Equal weight per listed client.
  static FleetDistribution uniform(std::span<const Date> snapshot_dates);

  const std::vector<std::pair<Date, double>>& entries() const { return entries_; }
  Date oldest() const;

 private:
  std::vector<std::pair<Date, double>> entries_;
};

using ShardLoads = std::map<ShardId, double>;

// load(s) = query_rate * sum of weights of snapshots older than the end of s,
// for every shard in service. `query_rate` is the rate of the whole fleet.
// Throws UnsupportedModeError for random sharding.
ShardLoads expected_shard_load(const FleetDistribution& fleet, const ShardTopology& topology, double query_rate);

using ReplicaAllocation = std::map<ShardId, std::uint64_t>;

// Splits `budget` replicas in proportion to load with largest-remainder
// rounding. Every shard with positive load gets at least one: shares below
// one are raised to one and the rest of the budget is re-split among the
// others. Equal remainders go to the newer shard. Throws
// InfeasibleBudgetError if the budget is smaller than the number of loaded
// shards, or positive while no shard has load.
ReplicaAllocation plan_replicas(const ShardLoads& loads, std::uint64_t budget);

// The proportional targets plan_replicas rounds: budget * load / total, with
// the at-least-one floor applied.
std::map<ShardId, double> replica_targets(const ShardLoads& loads, std::uint64_t budget);

// Shards no client in the fleet can still need.
std::set<ShardId> retire_shards(const FleetDistribution& fleet, const ShardTopology& topology);

}  // namespace snapsearch
