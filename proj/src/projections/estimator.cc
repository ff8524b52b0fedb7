#include "snapsearch/projections/estimator.h"

#include <algorithm>

#include "snapsearch/common/error.h"
#include "snapsearch/index/search.h"

namespace snapsearch {

std::vector<ZipfProbe> zipf_probes(const Index& reference, std::size_t n) {
  std::vector<std::pair<std::string, std::uint64_t>> ranked;
  for (const auto& [term, list] : reference.dictionary()) ranked.emplace_back(term, list.df());
  if (n == 0) throw ParameterError("need at least one probe");
  if (n > ranked.size()) {
    throw ParameterError("asked for " + std::to_string(n) + " probes from a vocabulary of " +
                         std::to_string(ranked.size()));
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  const double N = static_cast<double>(reference.stats().N);
  std::vector<ZipfProbe> probes;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = (2 * i + 1) * ranked.size() / (2 * n);
    probes.push_back({ranked[pos].first, static_cast<double>(ranked[pos].second) / N});
  }
  return probes;
}

SizeEstimate estimate_engine_size(const DfOracle& engine, std::span<const ZipfProbe> probes) {
  if (probes.empty()) throw ParameterError("no probes");
  SizeEstimate out;
  double sum = 0;
  std::size_t used = 0;
  for (const ZipfProbe& p : probes) {
    if (!(p.fraction > 0)) {
      out.excluded.push_back(p.term);
      continue;
    }
    sum += static_cast<double>(engine(p.term)) / p.fraction;
    ++used;
  }
  if (used == 0) throw EstimationError("every probe has a zero reference fraction");
  out.documents = sum / static_cast<double>(used);
  return out;
}

SearchEngine engine_from_index(std::string name, const Index& index, std::size_t k) {
  SearchEngine e;
  e.name = std::move(name);
  e.df = [&index](const std::string& term) -> std::uint64_t {
    const PostingsList* list = index.find(term);
    return list ? list->df() : 0;
  };
  e.top_k = [&index, k](const std::string& term) {
    std::vector<DocId> ids;
    if (index.stats().N == 0) return ids;
    const std::string query[] = {term};
    for (const SearchHit& h : search(index, query, k)) ids.push_back(h.doc_id);
    return ids;
  };
  e.contains = [&index](DocId id) { return index.contains(id); };
  return e;
}

WebSizeEstimate estimate_web_size(std::span<const SearchEngine> engines, std::span<const ZipfProbe> probes) {
  if (engines.empty()) throw ParameterError("no engines to combine");
  WebSizeEstimate out;
  for (std::size_t i = 0; i < engines.size(); ++i) {
    EngineContribution c;
    c.name = engines[i].name;
    c.size = estimate_engine_size(engines[i].df, probes).documents;
    if (i > 0) {
      std::uint64_t sampled = 0;
      std::uint64_t seen = 0;
      for (const ZipfProbe& p : probes) {
        for (DocId id : engines[i].top_k(p.term)) {
          ++sampled;
          for (std::size_t j = 0; j < i; ++j) {
            if (engines[j].contains(id)) {
              ++seen;
              break;
            }
          }
        }
      }
      c.uniqueness = sampled == 0 ? 1.0 : 1.0 - static_cast<double>(seen) / static_cast<double>(sampled);
    }
    out.documents += c.size * c.uniqueness;
    c.cumulative = out.documents;
    out.engines.push_back(std::move(c));
  }
  return out;
}

}  // namespace snapsearch
