#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "snapsearch/index/index.h"

namespace snapsearch {

struct ZipfProbe {
  std::string term;
  double fraction = 0;  // df / N in the reference collection
};

inline constexpr std::size_t kDefaultProbes = 50;

// Terms at evenly spaced positions of the reference vocabulary ranked by df
// (descending, ties by term). Throws ParameterError if n is 0 or exceeds the
// vocabulary.
std::vector<ZipfProbe> zipf_probes(const Index& reference, std::size_t n = kDefaultProbes);

using DfOracle = std::function<std::uint64_t(const std::string& term)>;

struct SizeEstimate {
  double documents = 0;
  std::vector<std::string> excluded;  // probes with zero reference fraction
};

// Mean of df(t) / p_t. Throws ParameterError for no probes and
// EstimationError when every probe is excluded.
SizeEstimate estimate_engine_size(const DfOracle& engine, std::span<const ZipfProbe> probes);

// What the estimator may ask of a search engine: a hit count, its top
// results for a one-term query, and whether it holds a given document.
struct SearchEngine {
  std::string name;
  DfOracle df;
  std::function<std::vector<DocId>(const std::string& term)> top_k;
  std::function<bool(DocId)> contains;
};

// Wraps an index; the top results are its BM25 ranking.
SearchEngine engine_from_index(std::string name, const Index& index, std::size_t k);

struct EngineContribution {
  std::string name;
  double size = 0;
  double uniqueness = 1;  // 1 - share of sampled results already in earlier engines
  double cumulative = 0;
};

struct WebSizeEstimate {
  double documents = 0;
  std::vector<EngineContribution> engines;
};

// Engines combined in the given order: size(e1) + sum size(ei) * uniqueness_i.
// Throws ParameterError for an empty list.
WebSizeEstimate estimate_web_size(std::span<const SearchEngine> engines, std::span<const ZipfProbe> probes);

}  // namespace snapsearch
