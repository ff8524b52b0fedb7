#include "snapsearch/index/delta.h"

#include <string>

#include "snapsearch/common/error.h"

namespace snapsearch {

std::vector<std::uint64_t> delta_encode(std::span<const std::uint64_t> values) {
  std::vector<std::uint64_t> gaps;
  gaps.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0) {
      gaps.push_back(values[0]);
      continue;
    }
    if (values[i] <= values[i - 1]) {
      throw IntegrityError("delta_encode: sequence not strictly increasing at index " + std::to_string(i), i);
    }
    gaps.push_back(values[i] - values[i - 1]);
  }
  return gaps;
}

std::vector<std::uint64_t> delta_decode(std::span<const std::uint64_t> gaps) {
  std::vector<std::uint64_t> values;
  values.reserve(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (i == 0) {
      values.push_back(gaps[0]);
      continue;
    }
    if (gaps[i] == 0) throw IntegrityError("delta_decode: zero gap at index " + std::to_string(i), i);
    if (gaps[i] > UINT64_MAX - values.back()) {
      throw CodecError("delta_decode: value overflows 64 bits at index " + std::to_string(i), i);
    }
    values.push_back(values.back() + gaps[i]);
  }
  return values;
}

}  // namespace snapsearch
