#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "snapsearch/common/date.h"
#include "snapsearch/corpus/document.h"
#include "snapsearch/index/index.h"
#include "snapsearch/index/search.h"
#include "snapsearch/updates/change.h"

namespace snapsearch {

struct ClientOptions {
  // Re-merge once delta documents plus tombstones reach
  // max(min_delta_docs, remerge_fraction * base document count).
  double remerge_fraction = 0.1;
  std::size_t min_delta_docs = 64;
};

// A device's local mirror: the corpus as of `applied_seq`, searchable through
// an immutable base index, a set of base documents that have since been
// replaced or removed, and a small mutable segment holding newer versions.
// Collection statistics are kept exact, so search results equal those of an
// index rebuilt from scratch over the same documents.
class ClientState {
 public:
  explicit ClientState(ClientOptions options = {});
  // A client whose snapshot holds `docs` as of `snapshot_date` and log
  // position `applied_seq`. Throws IntegrityError on duplicate ids.
  ClientState(std::span<const Document> docs, Date snapshot_date, std::uint64_t applied_seq,
              ClientOptions options = {});

  // Changes must start at applied_seq + 1 and be gapless (SequenceError).
  // Add of a live id, or Modify/Delete of an unknown id, throws
  // LogIntegrityError. On any error the state is unchanged.
  void apply(std::span<const Change> changes);

  SearchResult search(std::span<const std::string> query, std::size_t k) const;

  std::uint64_t applied_seq() const { return applied_seq_; }
  // Date of the newest applied change, or the snapshot date if none.
  Date snapshot_date() const { return snapshot_date_; }

  const CollectionStats& stats() const { return stats_; }
  bool contains(DocId id) const { return docs_.count(id) != 0; }
  std::size_t size() const { return docs_.size(); }
  // Current documents by increasing id.
  std::vector<Document> documents() const;

  std::size_t delta_size() const { return delta_.size(); }
  std::size_t tombstone_count() const { return tombstones_.size(); }
  std::size_t remerge_count() const { return remerges_; }
  const Index& base() const { return base_; }

 private:
  struct Record {
    Document doc;
    TermCounts counts;
    std::uint32_t length = 0;
  };

  void insert(Document doc);
  void erase(DocId id);
  void maybe_remerge();
  void remerge();

  ClientOptions options_;
  std::uint64_t applied_seq_ = 0;
  Date snapshot_date_;

  std::map<DocId, Record> docs_;
  CollectionStats stats_;

  Index base_;
  std::unordered_set<DocId> tombstones_;  // base documents no longer current
  std::map<DocId, std::uint32_t> delta_;  // length of current documents not in the base
  std::map<std::string, std::map<DocId, std::uint32_t>, std::less<>> delta_postings_;
  std::size_t remerges_ = 0;
};

}  // namespace snapsearch
