#include "snapsearch/index/search.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "snapsearch/common/error.h"

namespace snapsearch {

double score(const TermStats& term, std::uint32_t tf, std::uint32_t doclen) {
  const double n = static_cast<double>(term.N);
  const double df = static_cast<double>(term.df);
  const double idf = std::log1p((n - df + 0.5) / (df + 0.5));
  const double ratio = term.avg_doclen > 0.0 ? doclen / term.avg_doclen : 1.0;
  const double t = static_cast<double>(tf);
  return idf * (t * (kBm25K1 + 1.0)) / (t + kBm25K1 * (1.0 - kBm25B + kBm25B * ratio));
}

std::vector<std::string> unique_terms(std::span<const std::string> query) {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& term : query) {
    if (seen.insert(term).second) out.push_back(term);
  }
  return out;
}

void rank_and_truncate(SearchResult& hits, std::size_t k) {
  if (hits.size() > k) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), ranks_before);
    hits.resize(k);
  } else {
    std::sort(hits.begin(), hits.end(), ranks_before);
  }
}

SearchResult search(const Index& index, std::span<const std::string> query, std::size_t k,
                    const CollectionStats* stats_override, const DocFilter* filter) {
  if (k == 0) throw ParameterError("search: k must be at least 1");
  const CollectionStats& stats = stats_override ? *stats_override : index.stats();
  const double avg = stats.avg_doclen();

  std::unordered_map<DocId, double> acc;
  for (const auto& term : unique_terms(query)) {
    const PostingsList* list = index.find(term);
    if (list == nullptr) continue;
    const TermStats ts{stats.df_of(term), stats.N, avg};
    if (ts.df == 0) continue;
    list->for_each([&](std::uint32_t tf, DocId id) {
      if (filter && !(*filter)(id)) return;
      acc[id] += score(ts, tf, index.doc(id)->length);
    });
  }

  SearchResult hits;
  hits.reserve(acc.size());
  for (const auto& [id, s] : acc) hits.push_back({id, s});
  rank_and_truncate(hits, k);
  return hits;
}

}  // namespace snapsearch
