#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace snapsearch {

// Gap coding of a strictly increasing sequence: the first value is kept as is,
// each later one becomes its distance from the predecessor (always >= 1).
// Throws IntegrityError if the input is not strictly increasing.
std::vector<std::uint64_t> delta_encode(std::span<const std::uint64_t> values);

// Inverse of delta_encode. Throws IntegrityError on a zero gap after the
// first element and CodecError if the running sum overflows.
std::vector<std::uint64_t> delta_decode(std::span<const std::uint64_t> gaps);

}  // namespace snapsearch
