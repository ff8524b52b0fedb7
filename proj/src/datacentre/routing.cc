#include "snapsearch/datacentre/routing.h"

#include <algorithm>
#include <cmath>

#include "snapsearch/common/error.h"
#include "snapsearch/common/random.h"

namespace snapsearch {

std::set<ShardId> shards_after(Date snapshot_date, const ShardTopology& topology) {
  if (topology.mode() != ShardingMode::kDateSharded) {
    throw UnsupportedModeError("shards_after needs a date-sharded topology");
  }
  std::set<ShardId> out;
  for (const auto& [id, range] : topology.ranges()) {
    if (range.end > snapshot_date) out.insert(id);
  }
  return out;
}

QueryPlan plan_query(std::span<const std::string> terms, Date snapshot_date, const ShardTopology& topology) {
  QueryPlan plan;
  plan.terms = unique_terms(terms);
  plan.snapshot_date = snapshot_date;
  plan.mode = topology.mode();
  if (topology.mode() == ShardingMode::kDateSharded) {
    plan.selected_shards = shards_after(snapshot_date, topology);
    plan.include_local = true;
  } else {
    for (const auto& [id, s] : topology.shards()) plan.selected_shards.insert(id);
    plan.include_local = false;
  }
  return plan;
}

const CollectionStats& global_stats(const ShardTopology& topology, const CollectionStats*) {
  return topology.stats();
}

SupersedeSet supersede_since(Date snapshot_date, std::span<const Change> changes) {
  SupersedeSet out;
  for (const Change& c : changes) {
    if (c.date > snapshot_date) out.insert(c.doc_id);
  }
  return out;
}

SupersedeSet supersede_since(Date snapshot_date, const ChangeLog& log) {
  return supersede_since(snapshot_date, log.replay_all());
}

ChangeDates::ChangeDates(std::span<const Change> changes) {
  entries_.reserve(changes.size());
  for (const Change& c : changes) entries_.emplace_back(c.date, c.doc_id);
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
}

ChangeDates::ChangeDates(const ChangeLog& log) : ChangeDates(log.replay_all()) {}

SupersedeSet ChangeDates::since(Date snapshot_date) const {
  auto it = std::upper_bound(entries_.begin(), entries_.end(), snapshot_date,
                             [](Date d, const auto& e) { return d < e.first; });
  SupersedeSet out;
  for (; it != entries_.end(); ++it) out.insert(it->second);
  return out;
}

SearchResult merge(std::span<const SearchResult> partials, std::size_t k) {
  if (k == 0) throw ParameterError("merge: k must be at least 1");
  SearchResult all;
  std::unordered_set<DocId> seen;
  for (const auto& part : partials) {
    for (const SearchHit& h : part) {
      if (!seen.insert(h.doc_id).second) {
        throw IntegrityError("doc " + std::to_string(h.doc_id) + " returned by two partial results", h.doc_id);
      }
      all.push_back(h);
    }
  }
  rank_and_truncate(all, k);
  return all;
}

QueryPlan shed_load(const QueryPlan& plan, double keep_fraction, std::uint64_t seed) {
  if (plan.mode != ShardingMode::kRandomSharded) {
    throw UnsupportedModeError("load shedding would drop date shards and lose documents");
  }
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw ParameterError("keep_fraction must lie in (0, 1]");
  std::vector<ShardId> order(plan.selected_shards.begin(), plan.selected_shards.end());
  // The small slack keeps products such as 0.3 * 10 from rounding up.
  auto keep = static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(order.size()) - 1e-9));
  keep = std::clamp<std::size_t>(keep, order.empty() ? 0 : 1, order.size());
  Rng rng = make_rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  QueryPlan out = plan;
  out.selected_shards = std::set<ShardId>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
  return out;
}

namespace {

std::uint64_t postings_visited(const Index& index, std::span<const std::string> terms) {
  std::uint64_t n = 0;
  for (const auto& t : terms) {
    if (const PostingsList* list = index.find(t)) n += list->df();
  }
  return n;
}

}  // namespace

SearchResult execute_plan(const QueryPlan& plan, std::size_t k, const Index* client_index,
                          const ShardTopology& topology, const SupersedeSet& superseded, QueryCost* cost) {
  if (k == 0) throw ParameterError("search: k must be at least 1");
  const CollectionStats& stats = global_stats(topology);
  std::vector<SearchResult> partials;
  QueryCost local;

  // Resolve every shard first so an unavailable one fails the whole query.
  std::vector<const Shard*> shards;
  for (ShardId id : plan.selected_shards) shards.push_back(&topology.shard(id));

  if (plan.include_local && client_index != nullptr) {
    const DocFilter current = [&](DocId id) { return superseded.count(id) == 0; };
    partials.push_back(search(*client_index, plan.terms, k, &stats, &current));
    local.postings_client = postings_visited(*client_index, plan.terms);
  }
  for (const Shard* s : shards) {
    if (plan.include_local) {
      const Index& idx = s->index;
      const Date snapshot = plan.snapshot_date;
      const DocFilter newer = [&idx, snapshot](DocId id) { return idx.doc(id)->modified_date > snapshot; };
      partials.push_back(search(idx, plan.terms, k, &stats, &newer));
    } else {
      partials.push_back(search(s->index, plan.terms, k, &stats));
    }
    local.postings_datacentre += postings_visited(s->index, plan.terms);
    ++local.shards_touched;
  }
  if (cost) *cost = local;
  return merge(partials, k);
}

QueryRouter::QueryRouter(const ShardTopology& topology, const ChangeLog& log) : topology_(topology), dates_(log) {}

QueryRouter::QueryRouter(const ShardTopology& topology, std::span<const Change> changes)
    : topology_(topology), dates_(changes) {}

const SupersedeSet& QueryRouter::superseded(Date snapshot_date) const {
  auto& slot = cache_[snapshot_date];
  if (!slot) slot = std::make_unique<SupersedeSet>(dates_.since(snapshot_date));
  return *slot;
}

SearchResult QueryRouter::execute(std::span<const std::string> query, std::size_t k, const Index& client_index,
                                  Date snapshot_date, QueryCost* cost) const {
  const QueryPlan plan = plan_query(query, snapshot_date, topology_);
  return execute_plan(plan, k, &client_index, topology_, superseded(snapshot_date), cost);
}

SearchResult execute_query(std::span<const std::string> query, std::size_t k, const Index& client_index,
                           Date snapshot_date, const ShardTopology& topology, const ChangeLog& log) {
  return QueryRouter(topology, log).execute(query, k, client_index, snapshot_date);
}

}  // namespace snapsearch
