#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "snapsearch/corpus/document.h"
#include "snapsearch/index/index.h"

namespace snapsearch {

// BM25 constants. Fixed so that every index, shard and client scores alike.
inline constexpr double kBm25K1 = 0.9;
inline constexpr double kBm25B = 0.4;

struct TermStats {
  std::uint64_t df = 0;
  std::uint64_t N = 0;
  double avg_doclen = 0.0;
};

// BM25 contribution of one term to one document. Requires df >= 1, N >= df,
// doclen >= 1.
double score(const TermStats& term, std::uint32_t tf, std::uint32_t doclen);

struct SearchHit {
  DocId doc_id = 0;
  double score = 0.0;

  bool operator==(const SearchHit&) const = default;
};

// Ranked by score descending, then doc_id ascending.
using SearchResult = std::vector<SearchHit>;

// The ranking order used by every result list.
inline bool ranks_before(const SearchHit& a, const SearchHit& b) {
  return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
}

// Returns true for documents allowed into the result.
using DocFilter = std::function<bool(DocId)>;

// Repeated query terms count once; order of first occurrence is kept so that
// per-document sums are accumulated in the same order everywhere. With
// `stats_override`, df, N and avg_doclen come from it instead of the index;
// terms whose df there is 0 contribute nothing. Throws ParameterError if k == 0.
SearchResult search(const Index& index, std::span<const std::string> query, std::size_t k,
                    const CollectionStats* stats_override = nullptr, const DocFilter* filter = nullptr);

// Drops duplicate terms, keeping the first occurrence.
std::vector<std::string> unique_terms(std::span<const std::string> query);

// Sorts by ranks_before and truncates to k.
void rank_and_truncate(SearchResult& hits, std::size_t k);

}  // namespace snapsearch
