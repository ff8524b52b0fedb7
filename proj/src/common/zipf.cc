#include "snapsearch/common/zipf.h"

#include <algorithm>
#include <cmath>

#include "snapsearch/common/error.h"

namespace snapsearch {

ZipfSampler::ZipfSampler(std::uint64_t n, double s) {
  if (n == 0) throw ParameterError("zipf: vocabulary must be non-empty");
  if (!(s >= 0.0)) throw ParameterError("zipf: exponent must be non-negative");
  cdf_.resize(n);
  double total = 0.0;
  for (std::uint64_t r = 0; r < n; ++r) {
    total += std::pow(static_cast<double>(r + 1), -s);
    cdf_[r] = total;
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

std::uint64_t ZipfSampler::operator()(Rng& rng) const {
  const double u = uniform_unit(rng);
  return static_cast<std::uint64_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

double ZipfSampler::probability(std::uint64_t rank) const {
  if (rank >= cdf_.size()) return 0.0;
  return rank == 0 ? cdf_[0] : cdf_[rank] - cdf_[rank - 1];
}

}  // namespace snapsearch
