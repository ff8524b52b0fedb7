#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>

#include "snapsearch/common/date.h"
#include "snapsearch/corpus/document.h"
#include "snapsearch/index/index.h"

namespace snapsearch {

enum class ShardingMode { kDateSharded, kRandomSharded };

// Date bucket for date sharding; shard number for random sharding.
using ShardId = std::uint64_t;

inline constexpr std::uint32_t kDefaultGranularityDays = 365;

// floor(days since 1990-01-01 / granularity). Throws ParameterError if
// granularity is 0.
ShardId assign_shard(const Document& doc, std::uint32_t granularity_days = kDefaultGranularityDays);
ShardId bucket_of(Date date, std::uint32_t granularity_days = kDefaultGranularityDays);

// Half-open [start, end).
struct DateRange {
  Date start;
  Date end;

  bool contains(Date d) const { return start <= d && d < end; }
  bool operator==(const DateRange&) const = default;
};

DateRange bucket_range(ShardId bucket, std::uint32_t granularity_days);

struct Shard {
  ShardId id = 0;
  DateRange range;
  Index index;  // current versions of the documents living here
  bool available = true;

  // Ids of the documents in this shard.
  std::vector<DocId> doc_ids() const;
};

// The datacentre's shards plus the statistics authority: statistics over the
// whole current corpus, computed when the topology is built and kept when
// shards are retired (their documents still exist on client snapshots).
class ShardTopology {
 public:
  // One shard per bucket from the earliest to the latest document date, empty
  // buckets included. `cover_from`/`cover_to` extend the span. Throws
  // IntegrityError on duplicate ids.
  static ShardTopology date_sharded(std::span<const Document> current,
                                    std::uint32_t granularity_days = kDefaultGranularityDays,
                                    std::optional<Date> cover_from = std::nullopt,
                                    std::optional<Date> cover_to = std::nullopt);
  // Documents spread uniformly at random over `shard_count` shards. Every
  // shard's range is the whole corpus span.
  static ShardTopology random_sharded(std::span<const Document> current, std::size_t shard_count,
                                      std::uint64_t seed);
  // Reassembles a topology from stored parts; used by the manifest reader.
  static ShardTopology from_parts(ShardingMode mode, std::uint32_t granularity_days, std::map<ShardId, Shard> shards,
                                  std::map<ShardId, DateRange> retired, const CollectionStats& retired_stats);

  ShardingMode mode() const { return mode_; }
  std::uint32_t granularity_days() const { return granularity_days_; }

  const std::map<ShardId, Shard>& shards() const { return shards_; }
  // Throws ShardUnavailableError if the shard is retired, unknown or down.
  const Shard& shard(ShardId id) const;
  bool has_shard(ShardId id) const { return shards_.count(id) != 0; }

  // Every range ever served, retired ones included.
  std::map<ShardId, DateRange> ranges() const;
  const std::map<ShardId, DateRange>& retired() const { return retired_; }

  const CollectionStats& stats() const { return stats_; }
  // Statistics of the retired shards' documents, kept for the authority.
  const CollectionStats& retired_stats() const { return retired_stats_; }

  // Marks a replica set up or down; queries that need a down shard fail.
  void set_available(ShardId id, bool available);
  // Drops shards from service. Their statistics remain part of stats().
  void retire(const std::set<ShardId>& ids);

 private:
  void recompute_stats();

  ShardingMode mode_ = ShardingMode::kDateSharded;
  std::uint32_t granularity_days_ = kDefaultGranularityDays;
  std::map<ShardId, Shard> shards_;
  std::map<ShardId, DateRange> retired_;
  CollectionStats retired_stats_;
  CollectionStats stats_;
};

}  // namespace snapsearch
