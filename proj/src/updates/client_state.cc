#include "snapsearch/updates/client_state.h"

#include <algorithm>
#include <unordered_map>

#include "snapsearch/common/error.h"

namespace snapsearch {

ClientState::ClientState(ClientOptions options) : options_(options) {}

ClientState::ClientState(std::span<const Document> docs, Date snapshot_date, std::uint64_t applied_seq,
                         ClientOptions options)
    : options_(options), applied_seq_(applied_seq), snapshot_date_(snapshot_date) {
  for (const Document& d : docs) {
    if (docs_.count(d.doc_id)) throw IntegrityError("duplicate doc_id " + std::to_string(d.doc_id));
    insert(d);
  }
  remerge();
  remerges_ = 0;
}

void ClientState::apply(std::span<const Change> changes) {
  // Validate everything first so a bad batch leaves the state untouched.
  std::unordered_map<DocId, bool> live;
  auto is_live = [&](DocId id) {
    auto it = live.find(id);
    return it != live.end() ? it->second : contains(id);
  };
  std::uint64_t expect = applied_seq_ + 1;
  for (const Change& c : changes) {
    if (c.seq != expect) {
      throw SequenceError("expected change " + std::to_string(expect) + ", got " + std::to_string(c.seq), c.seq);
    }
    ++expect;
    try {
      validate_change_shape(c);
    } catch (const ParameterError& e) {
      throw LogIntegrityError("change " + std::to_string(c.seq) + ": " + e.what(), c.seq);
    }
    const bool exists = is_live(c.doc_id);
    if (c.kind == ChangeKind::Add && exists) {
      throw LogIntegrityError("change " + std::to_string(c.seq) + " adds live doc " + std::to_string(c.doc_id), c.seq);
    }
    if (c.kind != ChangeKind::Add && !exists) {
      throw LogIntegrityError("change " + std::to_string(c.seq) + " references unknown doc " +
                                  std::to_string(c.doc_id),
                              c.seq);
    }
    live[c.doc_id] = c.kind != ChangeKind::Delete;
  }

  for (const Change& c : changes) {
    if (c.kind != ChangeKind::Add) erase(c.doc_id);
    if (c.kind != ChangeKind::Delete) insert(*c.payload);
    applied_seq_ = c.seq;
    snapshot_date_ = std::max(snapshot_date_, c.date);
  }
  maybe_remerge();
}

void ClientState::insert(Document doc) {
  const DocId id = doc.doc_id;
  Record rec;
  rec.counts = count_terms(doc.text);
  for (const auto& [term, tf] : rec.counts) rec.length += tf;
  rec.doc = std::move(doc);
  const Record& stored = docs_.emplace(id, std::move(rec)).first->second;

  ++stats_.N;
  stats_.total_terms += stored.length;
  for (const auto& [term, tf] : stored.counts) {
    ++stats_.df[term];
    delta_postings_[term].emplace(id, tf);
  }
  delta_.emplace(id, stored.length);
}

void ClientState::erase(DocId id) {
  auto it = docs_.find(id);
  const Record& rec = it->second;
  --stats_.N;
  stats_.total_terms -= rec.length;
  for (const auto& [term, tf] : rec.counts) {
    auto df = stats_.df.find(term);
    if (--df->second == 0) stats_.df.erase(df);
  }
  if (delta_.erase(id)) {
    for (const auto& [term, tf] : rec.counts) {
      auto p = delta_postings_.find(term);
      p->second.erase(id);
      if (p->second.empty()) delta_postings_.erase(p);
    }
  } else {
    tombstones_.insert(id);
  }
  docs_.erase(it);
}

void ClientState::maybe_remerge() {
  const double fraction = options_.remerge_fraction * static_cast<double>(base_.stats().N);
  const std::size_t threshold = std::max(options_.min_delta_docs, static_cast<std::size_t>(fraction));
  if (delta_.size() + tombstones_.size() >= threshold) remerge();
}

void ClientState::remerge() {
  IndexBuilder builder;
  for (const auto& [id, rec] : docs_) builder.add(id, rec.doc.modified_date, rec.counts);
  base_ = std::move(builder).build();
  delta_.clear();
  delta_postings_.clear();
  tombstones_.clear();
  ++remerges_;
}

SearchResult ClientState::search(std::span<const std::string> query, std::size_t k) const {
  if (k == 0) throw ParameterError("search: k must be at least 1");
  const double avg = stats_.avg_doclen();
  std::unordered_map<DocId, double> acc;
  for (const auto& term : unique_terms(query)) {
    const TermStats ts{stats_.df_of(term), stats_.N, avg};
    if (ts.df == 0) continue;
    if (const PostingsList* list = base_.find(term)) {
      list->for_each([&](std::uint32_t tf, DocId id) {
        if (tombstones_.count(id)) return;
        acc[id] += score(ts, tf, base_.doc(id)->length);
      });
    }
    if (auto it = delta_postings_.find(term); it != delta_postings_.end()) {
      for (const auto& [id, tf] : it->second) acc[id] += score(ts, tf, delta_.at(id));
    }
  }
  SearchResult hits;
  hits.reserve(acc.size());
  for (const auto& [id, s] : acc) hits.push_back({id, s});
  rank_and_truncate(hits, k);
  return hits;
}

std::vector<Document> ClientState::documents() const {
  std::vector<Document> out;
  out.reserve(docs_.size());
  for (const auto& [id, rec] : docs_) out.push_back(rec.doc);
  return out;
}

}  // namespace snapsearch
