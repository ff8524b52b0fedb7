#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "snapsearch/datacentre/topology.h"
#include "snapsearch/index/search.h"
#include "snapsearch/updates/change_log.h"

namespace snapsearch {

struct QueryPlan {
  std::vector<std::string> terms;
  Date snapshot_date;
  ShardingMode mode = ShardingMode::kDateSharded;
  std::set<ShardId> selected_shards;
  bool include_local = true;  // the client's snapshot takes part

  bool operator==(const QueryPlan&) const = default;
};

// Shards whose range ends after the snapshot date, retired ones included (a
// query that needs one fails at execution). The bucket holding the snapshot
// date is selected. Throws UnsupportedModeError for random sharding.
std::set<ShardId> shards_after(Date snapshot_date, const ShardTopology& topology);

// Routing decision for a client. Random sharding sends every shard and no
// local part.
QueryPlan plan_query(std::span<const std::string> terms, Date snapshot_date, const ShardTopology& topology);

// Statistics over the current corpus as held by the datacentre. Whatever a
// client reports is ignored: the datacentre is the authority.
const CollectionStats& global_stats(const ShardTopology& topology, const CollectionStats* client_stats = nullptr);

using SupersedeSet = std::unordered_set<DocId>;

// Ids with any change dated strictly after the snapshot date.
SupersedeSet supersede_since(Date snapshot_date, std::span<const Change> changes);
SupersedeSet supersede_since(Date snapshot_date, const ChangeLog& log);

// Change dates of a log, sorted for repeated supersede lookups.
class ChangeDates {
 public:
  explicit ChangeDates(std::span<const Change> changes);
  explicit ChangeDates(const ChangeLog& log);

  SupersedeSet since(Date snapshot_date) const;

 private:
  std::vector<std::pair<Date, DocId>> entries_;  // date order
};

// Global top-k of partial results scored under the same statistics. Throws
// IntegrityError if a doc_id appears in two partials.
SearchResult merge(std::span<const SearchResult> partials, std::size_t k);

// Keeps ceil(keep_fraction * |selected|) shards (at least one), chosen by a
// seeded shuffle; for a fixed seed smaller fractions keep subsets of larger
// ones. Random sharding only: dropping a date shard would lose documents.
// Throws UnsupportedModeError, or ParameterError unless 0 < keep_fraction <= 1.
QueryPlan shed_load(const QueryPlan& plan, double keep_fraction, std::uint64_t seed);

struct QueryCost {
  std::uint64_t postings_client = 0;      // postings visited in the snapshot index
  std::uint64_t postings_datacentre = 0;  // postings visited across selected shards
  std::uint64_t shards_touched = 0;
};

// Runs a plan over the datacentre shards (and the client snapshot when
// plan.include_local). Shard hits dated on or before the snapshot are left to
// the client; client hits in the supersede set are dropped.
SearchResult execute_plan(const QueryPlan& plan, std::size_t k, const Index* client_index,
                          const ShardTopology& topology, const SupersedeSet& superseded, QueryCost* cost = nullptr);

// Serves queries for many clients against one topology and change log,
// caching supersede sets by snapshot date.
class QueryRouter {
 public:
  QueryRouter(const ShardTopology& topology, const ChangeLog& log);
  QueryRouter(const ShardTopology& topology, std::span<const Change> changes);

  SearchResult execute(std::span<const std::string> query, std::size_t k, const Index& client_index,
                       Date snapshot_date, QueryCost* cost = nullptr) const;
  const SupersedeSet& superseded(Date snapshot_date) const;

 private:
  const ShardTopology& topology_;
  ChangeDates dates_;
  mutable std::map<Date, std::unique_ptr<SupersedeSet>> cache_;
};

// One-shot form of QueryRouter::execute. The result equals searching one
// index built over the whole current corpus.
SearchResult execute_query(std::span<const std::string> query, std::size_t k, const Index& client_index,
                           Date snapshot_date, const ShardTopology& topology, const ChangeLog& log);

}  // namespace snapsearch
