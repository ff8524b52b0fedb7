#include "snapsearch/datacentre/topology.h"

#include <algorithm>
#include <string>

#include "snapsearch/common/error.h"
#include "snapsearch/common/random.h"

namespace snapsearch {

ShardId bucket_of(Date date, std::uint32_t granularity_days) {
  if (granularity_days == 0) throw ParameterError("granularity_days must be positive");
  if (date.days() < 0) throw ParameterError("date " + date.to_string() + " precedes the epoch");
  return static_cast<ShardId>(date.days()) / granularity_days;
}

ShardId assign_shard(const Document& doc, std::uint32_t granularity_days) {
  return bucket_of(doc.modified_date, granularity_days);
}

DateRange bucket_range(ShardId bucket, std::uint32_t granularity_days) {
  const auto start = static_cast<std::int64_t>(bucket) * granularity_days;
  return {Date::from_days(static_cast<std::int32_t>(start)),
          Date::from_days(static_cast<std::int32_t>(start + granularity_days))};
}

std::vector<DocId> Shard::doc_ids() const {
  std::vector<DocId> ids;
  ids.reserve(index.doc_table().size());
  for (const auto& e : index.doc_table()) ids.push_back(e.doc_id);
  return ids;
}

ShardTopology ShardTopology::date_sharded(std::span<const Document> current, std::uint32_t granularity_days,
                                          std::optional<Date> cover_from, std::optional<Date> cover_to) {
  ShardTopology t;
  t.mode_ = ShardingMode::kDateSharded;
  t.granularity_days_ = granularity_days;
  std::map<ShardId, IndexBuilder> builders;
  std::optional<ShardId> lo, hi;
  auto widen = [&](ShardId b) {
    lo = lo ? std::min(*lo, b) : b;
    hi = hi ? std::max(*hi, b) : b;
  };
  std::set<DocId> seen;
  for (const Document& d : current) {
    if (!seen.insert(d.doc_id).second) throw IntegrityError("duplicate doc_id " + std::to_string(d.doc_id));
    const ShardId b = assign_shard(d, granularity_days);
    builders[b].add(d);
    widen(b);
  }
  if (cover_from) widen(bucket_of(*cover_from, granularity_days));
  if (cover_to) widen(bucket_of(*cover_to, granularity_days));
  if (lo) {
    for (ShardId b = *lo; b <= *hi; ++b) {
      Shard s;
      s.id = b;
      s.range = bucket_range(b, granularity_days);
      if (auto it = builders.find(b); it != builders.end()) s.index = std::move(it->second).build();
      t.shards_.emplace(b, std::move(s));
    }
  }
  t.recompute_stats();
  return t;
}

ShardTopology ShardTopology::random_sharded(std::span<const Document> current, std::size_t shard_count,
                                            std::uint64_t seed) {
  if (shard_count == 0) throw ParameterError("shard_count must be positive");
  ShardTopology t;
  t.mode_ = ShardingMode::kRandomSharded;
  t.granularity_days_ = 0;
  std::vector<IndexBuilder> builders(shard_count);
  Rng rng = make_rng(seed);
  Date lo = max_corpus_date(), hi = min_corpus_date();
  std::set<DocId> seen;
  for (const Document& d : current) {
    if (!seen.insert(d.doc_id).second) throw IntegrityError("duplicate doc_id " + std::to_string(d.doc_id));
    builders[uniform_index(rng, shard_count)].add(d);
    lo = std::min(lo, d.modified_date);
    hi = std::max(hi, d.modified_date);
  }
  if (current.empty()) lo = hi = kEpoch;
  for (std::size_t i = 0; i < shard_count; ++i) {
    Shard s;
    s.id = i;
    s.range = {lo, hi.plus_days(1)};
    s.index = std::move(builders[i]).build();
    t.shards_.emplace(i, std::move(s));
  }
  t.recompute_stats();
  return t;
}

ShardTopology ShardTopology::from_parts(ShardingMode mode, std::uint32_t granularity_days,
                                        std::map<ShardId, Shard> shards, std::map<ShardId, DateRange> retired,
                                        const CollectionStats& retired_stats) {
  ShardTopology t;
  t.mode_ = mode;
  t.granularity_days_ = granularity_days;
  t.shards_ = std::move(shards);
  t.retired_ = std::move(retired);
  t.retired_stats_ = retired_stats;
  t.recompute_stats();
  return t;
}

const Shard& ShardTopology::shard(ShardId id) const {
  auto it = shards_.find(id);
  if (it == shards_.end()) {
    throw ShardUnavailableError(std::string(retired_.count(id) ? "retired" : "unknown") + " shard " +
                                    std::to_string(id),
                                id);
  }
  if (!it->second.available) throw ShardUnavailableError("no replica of shard " + std::to_string(id), id);
  return it->second;
}

std::map<ShardId, DateRange> ShardTopology::ranges() const {
  std::map<ShardId, DateRange> out = retired_;
  for (const auto& [id, s] : shards_) out.emplace(id, s.range);
  return out;
}

void ShardTopology::set_available(ShardId id, bool available) {
  auto it = shards_.find(id);
  if (it == shards_.end()) throw ParameterError("unknown shard " + std::to_string(id));
  it->second.available = available;
}

void ShardTopology::retire(const std::set<ShardId>& ids) {
  for (ShardId id : ids) {
    auto it = shards_.find(id);
    if (it == shards_.end()) continue;
    retired_stats_ += it->second.index.stats();
    retired_.emplace(id, it->second.range);
    shards_.erase(it);
  }
}

void ShardTopology::recompute_stats() {
  stats_ = retired_stats_;
  for (const auto& [id, s] : shards_) stats_ += s.index.stats();
}

}  // namespace snapsearch
