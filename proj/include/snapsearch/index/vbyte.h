#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace snapsearch {

// Variable-byte integers: 7-bit groups, least significant first; the high bit
// is set on every byte except the last. 0 -> 00, 127 -> 7F, 128 -> 80 01,
// 300 -> AC 02. A 64-bit value takes at most 10 bytes.
void encode_vbyte(std::uint64_t value, std::vector<std::uint8_t>& out);
std::vector<std::uint8_t> encode_vbyte(std::span<const std::uint64_t> values);

// Decodes the whole buffer. Throws CodecError on a truncated or overlong value.
std::vector<std::uint64_t> decode_vbyte(std::span<const std::uint8_t> bytes);

// Sequential reader over a vbyte stream.
class VByteReader {
 public:
  explicit VByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t next();
  std::span<const std::uint8_t> take(std::size_t n);

  bool done() const { return pos_ == bytes_.size(); }
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace snapsearch
