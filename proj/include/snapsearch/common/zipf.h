#pragma once

#include <cstdint>
#include <vector>

#include "snapsearch/common/random.h"

namespace snapsearch {

// Draws ranks in [0, n) with P(r) proportional to 1 / (r + 1)^s.
class ZipfSampler {
 public:
  // Throws ParameterError if n == 0 or s < 0.
  ZipfSampler(std::uint64_t n, double s);

  std::uint64_t operator()(Rng& rng) const;
  double probability(std::uint64_t rank) const;
  std::uint64_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace snapsearch
