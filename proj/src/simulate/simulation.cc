#include "snapsearch/simulate/simulation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "snapsearch/common/error.h"
#include "snapsearch/common/text_format.h"
#include "snapsearch/common/zipf.h"
#include "snapsearch/corpus/synthetic.h"
#include "snapsearch/datacentre/routing.h"
#include "snapsearch/index/search.h"
#include "snapsearch/updates/change_log.h"
#include "snapsearch/updates/history.h"

namespace snapsearch {
namespace {

// Random stream numbers; fixed so that runs stay comparable across versions.
constexpr std::uint64_t kCorpusStream = 1;
constexpr std::uint64_t kQueryStream = 2;
constexpr std::uint64_t kAgeStream = 3;

constexpr std::uint64_t kBytesPerHit = 16;  // doc id and score
constexpr std::uint64_t kRequestOverhead = 8;
constexpr std::uint64_t kDaysPerMonth = 30;

// For each term, the dates on which versions containing it appeared and
// disappeared. Both lists are in date order because the history is.
class VersionIntervals {
 public:
  explicit VersionIntervals(std::span<const Change> history) {
    std::unordered_map<DocId, std::vector<std::string>> live;
    for (const Change& c : history) {
      if (c.kind != ChangeKind::Add) {
        for (const auto& t : live[c.doc_id]) terms_[t].ends.push_back(c.date);
        live.erase(c.doc_id);
      }
      if (c.kind != ChangeKind::Delete) {
        auto& terms = live[c.doc_id];
        for (const auto& [t, tf] : count_terms(c.payload->text)) {
          terms_[t].starts.push_back(c.date);
          terms.push_back(t);
        }
      }
    }
  }

  // Documents containing `term` in the corpus as of the end of `day`.
  std::uint64_t df(const std::string& term, Date day) const {
    auto it = terms_.find(term);
    if (it == terms_.end()) return 0;
    const auto& v = it->second;
    const auto started = std::upper_bound(v.starts.begin(), v.starts.end(), day) - v.starts.begin();
    const auto ended = std::upper_bound(v.ends.begin(), v.ends.end(), day) - v.ends.begin();
    return static_cast<std::uint64_t>(started - ended);
  }

 private:
  struct Dates {
    std::vector<Date> starts;
    std::vector<Date> ends;
  };
  std::unordered_map<std::string, Dates> terms_;
};

std::uint64_t request_bytes(std::span<const std::string> terms) {
  std::uint64_t n = kRequestOverhead;
  for (const auto& t : terms) n += t.size() + 1;
  return n;
}

}  // namespace

std::string_view to_string(SimMode mode) {
  switch (mode) {
    case SimMode::kCentralized:
      return "centralized";
    case SimMode::kDateSharded:
      return "date-sharded";
    case SimMode::kBroadcast:
      return "broadcast";
  }
  return "?";
}

SimMode parse_sim_mode(std::string_view text) {
  if (text == "centralized") return SimMode::kCentralized;
  if (text == "date-sharded") return SimMode::kDateSharded;
  if (text == "broadcast") return SimMode::kBroadcast;
  throw ParameterError("unknown mode '" + std::string(text) + "' (centralized, date-sharded, broadcast)");
}

void validate(const SimConfig& c) {
  if (c.n_clients == 0) throw ParameterError("n_clients must be positive");
  if (!(c.device_lifetime_days > 0)) throw ParameterError("device_lifetime_days must be positive");
  if (!(c.queries_per_client_per_month >= 0)) throw ParameterError("queries_per_client_per_month must be >= 0");
  if (c.horizon_days == 0) throw ParameterError("horizon_days must be positive");
  if (!(c.docs_per_day >= 0)) throw ParameterError("docs_per_day must be >= 0");
  if (c.vocabulary == 0) throw ParameterError("vocabulary must be positive");
  if (c.granularity_days == 0) throw ParameterError("granularity_days must be positive");
  if (c.k == 0) throw ParameterError("k must be positive");
  if (c.query_months == 0) throw ParameterError("query_months must be positive");
  if (c.query_months * kDaysPerMonth > c.horizon_days) throw ParameterError("query window longer than the horizon");
  if (!c.start_date.plus_days(static_cast<std::int32_t>(c.horizon_days - 1)).in_corpus_range() ||
      !c.start_date.in_corpus_range()) {
    throw ParameterError("simulated horizon leaves the corpus date range");
  }
}

double sample_snapshot_age(double lifetime_days, Rng& rng) {
  if (!(lifetime_days > 0)) throw ParameterError("device lifetime must be positive");
  return uniform_unit(rng) * lifetime_days;
}

Workload generate_workload(const SimConfig& config) {
  validate(config);
  Workload w;
  w.now = config.start_date.plus_days(static_cast<std::int32_t>(config.horizon_days - 1));

  HistoryShape shape;
  shape.first_date = config.start_date;
  shape.last_date = w.now;
  shape.events_per_day = config.docs_per_day;
  shape.modify_fraction = config.modify_fraction;
  shape.delete_fraction = config.delete_fraction;
  shape.vocabulary = config.vocabulary;
  shape.zipf_s = config.zipf_s;
  shape.min_length = 1;
  shape.max_length = std::max<std::uint64_t>(1, config.max_doc_length);
  Rng corpus_rng = make_rng(config.seed, kCorpusStream);
  w.history = generate_history(shape, corpus_rng);
  assign_sequence(w.history);

  Rng age_rng = make_rng(config.seed, kAgeStream);
  for (std::uint64_t c = 0; c < config.n_clients; ++c) {
    const double age = sample_snapshot_age(config.device_lifetime_days, age_rng);
    switch (config.snapshot_policy) {
      case SnapshotPolicy::kUniformAge:
        w.snapshot_dates.push_back(
            std::max(kEpoch, w.now.plus_days(-static_cast<std::int32_t>(std::floor(age)))));
        break;
      case SnapshotPolicy::kEpoch:
        w.snapshot_dates.push_back(kEpoch);
        break;
      case SnapshotPolicy::kCurrent:
        w.snapshot_dates.push_back(w.now);
        break;
    }
  }

  // Query terms by Zipf rank with exponent 1, one to three per query.
  const auto vocab = synthetic_vocabulary(config.vocabulary);
  const ZipfSampler zipf(vocab.size(), 1.0);
  Rng query_rng = make_rng(config.seed, kQueryStream);
  const double whole = std::floor(config.queries_per_client_per_month);
  const double part = config.queries_per_client_per_month - whole;
  for (std::uint64_t m = 0; m < config.query_months; ++m) {
    for (std::uint64_t c = 0; c < config.n_clients; ++c) {
      const auto n = static_cast<std::uint64_t>(whole) + (bernoulli(query_rng, part) ? 1 : 0);
      for (std::uint64_t i = 0; i < n; ++i) {
        SimQuery q;
        q.client = c;
        const std::uint64_t terms = 1 + uniform_index(query_rng, 3);
        for (std::uint64_t t = 0; t < terms; ++t) q.terms.push_back(vocab[zipf(query_rng)]);
        w.queries.push_back(std::move(q));
      }
    }
  }
  return w;
}

SimMetrics run(const SimConfig& config) { return run(config, generate_workload(config)); }

SimMetrics run(const SimConfig& config, const Workload& w) {
  validate(config);
  const auto current = corpus_after(w.history);
  const ShardTopology topology = ShardTopology::date_sharded(current, config.granularity_days, config.start_date, w.now);
  const CollectionStats& stats = topology.stats();

  SimMetrics m;
  m.queries = w.queries.size();
  for (const auto& [id, s] : topology.shards()) m.shard_load[id] = 0;

  if (config.mode == SimMode::kBroadcast) {
    ChangeLog log;
    for (const Change& c : w.history) log.append(c);
    m.broadcast_bytes = log.framed_bytes() * config.n_clients;
    m.bytes_transferred = m.broadcast_bytes;
  }

  std::unique_ptr<VersionIntervals> versions;
  if (config.mode == SimMode::kDateSharded) versions = std::make_unique<VersionIntervals>(w.history);

  for (const SimQuery& q : w.queries) {
    const auto terms = unique_terms(q.terms);
    std::uint64_t full = 0;
    for (const auto& t : terms) full += stats.df_of(t);

    switch (config.mode) {
      case SimMode::kCentralized: {
        m.postings_scored_datacentre += full;
        ++m.shards_touched[topology.shards().size()];
        for (auto& [id, load] : m.shard_load) ++load;
        m.bytes_transferred += request_bytes(terms) + kBytesPerHit * std::min(config.k, full);
        break;
      }
      case SimMode::kDateSharded: {
        const Date snapshot = w.snapshot_dates[q.client];
        const auto selected = shards_after(snapshot, topology);
        std::uint64_t dc = 0;
        for (ShardId id : selected) {
          const Index& index = topology.shards().at(id).index;
          for (const auto& t : terms) {
            if (const PostingsList* list = index.find(t)) dc += list->df();
          }
          ++m.shard_load[id];
        }
        for (const auto& t : terms) m.postings_scored_clients += versions->df(t, snapshot);
        m.postings_scored_datacentre += dc;
        ++m.shards_touched[selected.size()];
        m.bytes_transferred += request_bytes(terms) + kBytesPerHit * std::min(config.k, dc);
        break;
      }
      case SimMode::kBroadcast: {
        m.postings_scored_clients += full;
        ++m.shards_touched[0];
        break;
      }
    }
  }
  return m;
}

std::vector<CompareRow> compare(std::span<const SimConfig> configs) {
  if (configs.empty()) return {};
  SimConfig baseline = configs.front();
  baseline.mode = SimMode::kCentralized;
  for (const SimConfig& c : configs) {
    SimConfig other = c;
    other.mode = SimMode::kCentralized;
    if (other.seed != baseline.seed) throw ComparabilityError("configs use different seeds");
    if (other != baseline) throw ComparabilityError("configs differ in more than the mode");
  }
  const Workload workload = generate_workload(baseline);
  const std::uint64_t base = run(baseline, workload).postings_scored_datacentre;
  std::vector<CompareRow> rows;
  for (const SimConfig& c : configs) {
    CompareRow row{c, run(c, workload), 1.0};
    const auto dc = row.metrics.postings_scored_datacentre;
    if (base > 0) {
      row.dc_cost_ratio = static_cast<double>(dc) / static_cast<double>(base);
    } else {
      row.dc_cost_ratio = dc == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_compare_csv(std::ostream& out, std::span<const CompareRow> rows) {
  out << "mode,seed,n_clients,horizon_days,postings_dc,postings_client,bytes,broadcast_bytes,dc_cost_ratio\n";
  for (const CompareRow& r : rows) {
    out << to_string(r.config.mode) << ',' << r.config.seed << ',' << r.config.n_clients << ','
        << r.config.horizon_days << ',' << r.metrics.postings_scored_datacentre << ','
        << r.metrics.postings_scored_clients << ',' << r.metrics.bytes_transferred << ','
        << r.metrics.broadcast_bytes << ',' << format_number(r.dc_cost_ratio) << '\n';
  }
}

}  // namespace snapsearch
