#include "snapsearch/datacentre/fleet.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "snapsearch/common/error.h"

namespace snapsearch {

FleetDistribution::FleetDistribution(std::vector<std::pair<Date, double>> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ParameterError("fleet has no clients");
  double total = 0.0;
  for (const auto& [date, w] : entries_) {
    if (!(w > 0.0)) throw ParameterError("fleet weights must be positive");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw ParameterError("fleet weights sum to " + std::to_string(total));
}

FleetDistribution FleetDistribution::uniform(std::span<const Date> snapshot_dates) {
  std::map<Date, std::uint64_t> counts;
  for (Date d : snapshot_dates) ++counts[d];
  std::vector<std::pair<Date, double>> entries;
  for (const auto& [d, n] : counts) {
    entries.emplace_back(d, static_cast<double>(n) / static_cast<double>(snapshot_dates.size()));
  }
  // Absorb rounding so the weights sum to 1 within the tolerance.
  if (!entries.empty()) {
    double rest = 1.0;
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) rest -= entries[i].second;
    entries.back().second = rest;
  }
  return FleetDistribution(std::move(entries));
}

Date FleetDistribution::oldest() const {
  Date d = entries_.front().first;
  for (const auto& e : entries_) d = std::min(d, e.first);
  return d;
}

ShardLoads expected_shard_load(const FleetDistribution& fleet, const ShardTopology& topology, double query_rate) {
  if (topology.mode() != ShardingMode::kDateSharded) {
    throw UnsupportedModeError("expected_shard_load needs a date-sharded topology");
  }
  ShardLoads loads;
  for (const auto& [id, shard] : topology.shards()) {
    double w = 0.0;
    for (const auto& [date, weight] : fleet.entries()) {
      if (date < shard.range.end) w += weight;
    }
    loads[id] = query_rate * w;
  }
  return loads;
}

std::map<ShardId, double> replica_targets(const ShardLoads& loads, std::uint64_t budget) {
  std::map<ShardId, double> targets;
  std::set<ShardId> open;
  for (const auto& [id, load] : loads) {
    if (load < 0.0 || !std::isfinite(load)) throw ParameterError("shard loads must be finite and non-negative");
    targets[id] = 0.0;
    if (load > 0.0) open.insert(id);
  }
  if (budget < open.size()) {
    throw InfeasibleBudgetError("budget of " + std::to_string(budget) + " replicas is below the " +
                                std::to_string(open.size()) + " shards carrying load");
  }
  if (open.empty()) {
    if (budget > 0) throw InfeasibleBudgetError("no shard carries load to receive replicas");
    return targets;
  }
  // Raise shares below one to one and re-split what remains until stable.
  double remaining = static_cast<double>(budget);
  for (;;) {
    double total = 0.0;
    for (ShardId id : open) total += loads.at(id);
    bool changed = false;
    for (auto it = open.begin(); it != open.end();) {
      if (remaining * loads.at(*it) / total < 1.0) {
        targets[*it] = 1.0;
        remaining -= 1.0;
        it = open.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
    if (!changed) {
      for (ShardId id : open) targets[id] = remaining * loads.at(id) / total;
      return targets;
    }
  }
}

ReplicaAllocation plan_replicas(const ShardLoads& loads, std::uint64_t budget) {
  const auto targets = replica_targets(loads, budget);
  ReplicaAllocation alloc;
  std::uint64_t assigned = 0;
  std::vector<std::pair<double, ShardId>> remainders;
  for (const auto& [id, q] : targets) {
    const auto whole = static_cast<std::uint64_t>(std::floor(q));
    alloc[id] = whole;
    assigned += whole;
    if (loads.at(id) > 0.0) remainders.emplace_back(q - std::floor(q), id);
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second > b.second;
  });
  // Floating-point rounding can leave the floors a replica off either way.
  for (std::size_t i = 0; assigned < budget; i = (i + 1) % remainders.size()) {
    ++alloc[remainders[i].second];
    ++assigned;
  }
  for (auto it = remainders.rbegin(); assigned > budget && it != remainders.rend(); ++it) {
    if (alloc[it->second] > 1) {
      --alloc[it->second];
      --assigned;
    }
  }
  return alloc;
}

std::set<ShardId> retire_shards(const FleetDistribution& fleet, const ShardTopology& topology) {
  std::set<ShardId> out;
  for (const auto& [id, load] : expected_shard_load(fleet, topology, 1.0)) {
    if (load == 0.0) out.insert(id);
  }
  return out;
}

}  // namespace snapsearch
