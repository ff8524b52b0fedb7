#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "snapsearch/common/date.h"
#include "snapsearch/common/random.h"
#include "snapsearch/datacentre/topology.h"
#include "snapsearch/updates/change.h"

namespace snapsearch {

enum class SimMode { kCentralized, kDateSharded, kBroadcast };

std::string_view to_string(SimMode mode);
// "centralized", "date-sharded", "broadcast". Throws ParameterError.
SimMode parse_sim_mode(std::string_view text);

enum class SnapshotPolicy {
  kUniformAge,  // age uniform over the device lifetime
  kEpoch,       // every device holds the 1990-01-01 snapshot (nothing local)
  kCurrent,     // every device is up to date
};

struct SimConfig {
  std::uint64_t seed = 0;
  std::uint64_t n_clients = 100;
  double device_lifetime_days = 548;
  double queries_per_client_per_month = 10;
  std::uint64_t horizon_days = 3650;
  Date start_date = Date::from_ymd(2015, 1, 1);
  // Corpus generator.
  double docs_per_day = 5;
  std::uint64_t vocabulary = 5000;
  double zipf_s = 1.0;
  double modify_fraction = 0.1;
  double delete_fraction = 0.02;
  std::uint64_t max_doc_length = 60;

  SimMode mode = SimMode::kDateSharded;
  SnapshotPolicy snapshot_policy = SnapshotPolicy::kUniformAge;
  std::uint32_t granularity_days = 365;
  std::uint64_t k = 10;
  // Queries are replayed over the last this-many 30-day months of the
  // horizon, against the corpus as it stands at the end.
  std::uint64_t query_months = 1;

  bool operator==(const SimConfig&) const = default;
};

// Throws ParameterError for a config with a non-positive count or rate.
void validate(const SimConfig& config);

struct SimMetrics {
  std::uint64_t queries = 0;
  std::uint64_t postings_scored_datacentre = 0;
  std::uint64_t postings_scored_clients = 0;
  // Request and response bytes between clients and the datacentre, plus the
  // broadcast volume in Broadcast mode. A proxy, not a wire format.
  std::uint64_t bytes_transferred = 0;
  std::uint64_t broadcast_bytes = 0;
  std::map<std::uint64_t, std::uint64_t> shards_touched;  // shards per query -> queries
  std::map<ShardId, std::uint64_t> shard_load;            // queries routed to each shard

  bool operator==(const SimMetrics&) const = default;
};

// Uniform on [0, lifetime): a device replaced every `lifetime` days is, at a
// random instant, that far through its life. Throws ParameterError if
// lifetime <= 0.
double sample_snapshot_age(double lifetime_days, Rng& rng);

struct SimQuery {
  std::size_t client = 0;
  std::vector<std::string> terms;
};

// Everything a run is driven by. The corpus history, the query stream and the
// snapshot ages come from separate random streams of the seed, so changing
// the device lifetime alters ages only.
struct Workload {
  std::vector<Change> history;  // seq assigned, dated within the horizon
  Date now;                     // last day of the horizon
  std::vector<Date> snapshot_dates;
  std::vector<SimQuery> queries;
};

Workload generate_workload(const SimConfig& config);

// Cost of each query is the total length of the postings lists of its terms
// over every index that is actually searched.
SimMetrics run(const SimConfig& config);
SimMetrics run(const SimConfig& config, const Workload& workload);

struct CompareRow {
  SimConfig config;
  SimMetrics metrics;
  double dc_cost_ratio = 1.0;  // datacentre postings relative to Centralized
};

// Runs configs that differ only in mode; a Centralized baseline with the same
// settings is run when none is listed. Throws ComparabilityError otherwise.
std::vector<CompareRow> compare(std::span<const SimConfig> configs);

// Columns: mode, seed, n_clients, horizon_days, postings_dc, postings_client,
// bytes, broadcast_bytes, dc_cost_ratio.
void write_compare_csv(std::ostream& out, std::span<const CompareRow> rows);

}  // namespace snapsearch
