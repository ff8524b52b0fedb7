#include "support/sim_oracle.h"

#include <algorithm>
#include <map>
#include <set>

#include "support/oracles.h"

namespace snapsearch::testing {
namespace {

std::vector<Document> replay_until(std::span<const Change> history, Date last) {
  std::map<DocId, Document> docs;
  for (const Change& c : history) {
    if (c.date > last) break;
    if (c.kind == ChangeKind::Delete) {
      docs.erase(c.doc_id);
    } else {
      docs[c.doc_id] = *c.payload;
    }
  }
  std::vector<Document> out;
  for (auto& [id, d] : docs) out.push_back(std::move(d));
  return out;
}

bool bucket_after(Date doc_date, std::uint32_t g, Date snapshot) {
  const std::int64_t end = (static_cast<std::int64_t>(doc_date.days()) / g + 1) * g;
  return end > snapshot.days();
}

}  // namespace

EnumeratedCost enumerate_costs(const SimConfig& config, const Workload& w, bool with_client) {
  const auto current = replay_until(w.history, w.now);
  const auto table = naive_term_counts(current);
  std::map<DocId, Date> dates;
  for (const Document& d : current) dates[d.doc_id] = d.modified_date;

  std::map<Date, TermCountTable> snapshot_tables;
  EnumeratedCost out;
  double weighted = 0;
  double weight = 0;
  const std::int64_t first = config.start_date.days();
  const std::int64_t last = w.now.days();
  for (const SimQuery& q : w.queries) {
    const Date snapshot = w.snapshot_dates[q.client];
    const std::set<std::string> terms(q.terms.begin(), q.terms.end());
    std::uint64_t all = 0;
    for (const auto& t : terms) {
      auto it = table.find(t);
      if (it == table.end()) continue;
      all += it->second.size();
      for (const auto& [id, tf] : it->second) {
        if (bucket_after(dates.at(id), config.granularity_days, snapshot)) ++out.date_sharded;
      }
    }
    out.centralized += all;

    const std::int64_t g = config.granularity_days;
    const std::int64_t from = std::max<std::int64_t>(first, snapshot.days() / g * g);
    const double fraction =
        std::clamp(static_cast<double>(last - from + 1) / static_cast<double>(last - first + 1), 0.0, 1.0);
    weighted += static_cast<double>(all) * fraction;
    weight += static_cast<double>(all);

    if (with_client) {
      auto st = snapshot_tables.find(snapshot);
      if (st == snapshot_tables.end()) {
        st = snapshot_tables.emplace(snapshot, naive_term_counts(replay_until(w.history, snapshot))).first;
      }
      for (const auto& t : terms) {
        auto it = st->second.find(t);
        if (it != st->second.end()) out.client += it->second.size();
      }
    }
  }
  out.closed_form_ratio = weight > 0 ? weighted / weight : 1.0;
  return out;
}

}  // namespace snapsearch::testing
