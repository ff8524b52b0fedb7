#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "snapsearch/common/random.h"
#include "snapsearch/common/zipf.h"

namespace snapsearch {

// `size` distinct normalized terms: bijective base-26 spellings of the rank,
// some with an accented letter or a digit appended.
std::vector<std::string> synthetic_vocabulary(std::size_t size);

// Space-separated text whose terms follow a Zipf law over a vocabulary.
class ZipfText {
 public:
  ZipfText(std::size_t vocabulary, double zipf_s);

  std::string operator()(Rng& rng, std::size_t length) const;
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const ZipfSampler& sampler() const { return zipf_; }

 private:
  std::vector<std::string> vocabulary_;
  ZipfSampler zipf_;
};

}  // namespace snapsearch
