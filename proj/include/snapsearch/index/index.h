#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "snapsearch/common/date.h"
#include "snapsearch/corpus/document.h"

namespace snapsearch {

struct Posting {
  DocId doc_id = 0;
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

// All documents in which a term occurs exactly `tf` times.
struct ImpactGroup {
  std::uint32_t tf = 0;
  std::vector<DocId> doc_ids;  // strictly increasing

  bool operator==(const ImpactGroup&) const = default;
};

// Postings for one term, grouped by tf (highest first) and held in coded
// form: group count, then per group tf, doc count and doc-id gaps, all vbyte.
class PostingsList {
 public:
  PostingsList() = default;

  // Throws IntegrityError unless tf values are positive and strictly
  // decreasing, every group is non-empty with increasing ids, and no id
  // repeats across groups.
  static PostingsList from_groups(std::span<const ImpactGroup> groups);
  // Any order; doc ids must be distinct and tf positive.
  static PostingsList from_postings(std::vector<Posting> postings);
  // Validates a coded block; throws CodecError or IntegrityError.
  static PostingsList from_bytes(std::span<const std::uint8_t> bytes);

  std::vector<ImpactGroup> groups() const;
  // Postings in stored order (tf descending, then doc id).
  std::vector<Posting> postings() const;

  // Calls f(tf, doc_id) for every posting without materializing a vector.
  template <typename F>
  void for_each(F&& f) const;

  std::uint64_t df() const { return df_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  bool operator==(const PostingsList& other) const { return bytes_ == other.bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t df_ = 0;
};

struct DocInfo {
  std::uint32_t length = 0;  // terms
  Date modified_date;

  bool operator==(const DocInfo&) const = default;
};

struct DocEntry {
  DocId doc_id = 0;
  DocInfo info;

  bool operator==(const DocEntry&) const = default;
};

struct CollectionStats {
  std::uint64_t N = 0;
  std::uint64_t total_terms = 0;
  std::map<std::string, std::uint64_t, std::less<>> df;

  double avg_doclen() const { return N == 0 ? 0.0 : static_cast<double>(total_terms) / static_cast<double>(N); }
  std::uint64_t df_of(std::string_view term) const;

  // Element-wise sum; used to combine statistics of disjoint collections.
  CollectionStats& operator+=(const CollectionStats& other);

  bool operator==(const CollectionStats&) const = default;
};

// Term counts of one document, in term order.
using TermCounts = std::map<std::string, std::uint32_t, std::less<>>;
TermCounts count_terms(std::string_view text);

// An immutable term-only inverted file.
class Index {
 public:
  using Dictionary = std::map<std::string, PostingsList, std::less<>>;

  Index() = default;

  const Dictionary& dictionary() const { return dictionary_; }
  const PostingsList* find(std::string_view term) const;

  // Sorted by doc_id.
  const std::vector<DocEntry>& doc_table() const { return doc_table_; }
  const DocInfo* doc(DocId id) const;
  bool contains(DocId id) const { return doc(id) != nullptr; }

  const CollectionStats& stats() const { return stats_; }

  bool operator==(const Index& other) const {
    return dictionary_ == other.dictionary_ && doc_table_ == other.doc_table_ && stats_ == other.stats_;
  }

 private:
  friend class IndexBuilder;
  friend Index assemble_index(std::vector<DocEntry> docs, Dictionary dictionary);

  Dictionary dictionary_;
  std::vector<DocEntry> doc_table_;
  std::unordered_map<DocId, std::uint32_t> position_;
  CollectionStats stats_;
};

// Checks every Index invariant and derives the statistics. Throws
// IntegrityError on violation. Used by the file reader.
Index assemble_index(std::vector<DocEntry> docs, Index::Dictionary dictionary);

class IndexBuilder {
 public:
  // Throws IntegrityError on a duplicate doc_id or a date outside the
  // corpus range.
  void add(const Document& doc);
  void add(DocId id, Date modified_date, const TermCounts& counts);

  Index build() &&;
  std::size_t size() const { return docs_.size(); }

 private:
  std::map<DocId, DocInfo> docs_;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

Index build_index(std::span<const Document> docs);

template <typename F>
void PostingsList::for_each(F&& f) const {
  // Coded form is validated on construction, so the plain decoder is safe.
  std::size_t pos = 0;
  auto next = [&]() {
    std::uint64_t v = 0;
    for (unsigned shift = 0;; shift += 7) {
      const std::uint8_t b = bytes_[pos++];
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if ((b & 0x80) == 0) return v;
    }
  };
  if (bytes_.empty()) return;
  const std::uint64_t group_count = next();
  for (std::uint64_t g = 0; g < group_count; ++g) {
    const auto tf = static_cast<std::uint32_t>(next());
    const std::uint64_t count = next();
    DocId id = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      id = (i == 0) ? next() : id + next();
      f(tf, id);
    }
  }
}

}  // namespace snapsearch
