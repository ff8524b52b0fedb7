#include "snapsearch/index/vbyte.h"

#include <string>

#include "snapsearch/common/error.h"

namespace snapsearch {

void encode_vbyte(std::uint64_t value, std::vector<std::uint8_t>& out) {
  while (value >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(value | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(value));
}

std::vector<std::uint8_t> encode_vbyte(std::span<const std::uint64_t> values) {
  std::vector<std::uint8_t> out;
  out.reserve(values.size() * 2);
  for (std::uint64_t v : values) encode_vbyte(v, out);
  return out;
}

std::vector<std::uint64_t> decode_vbyte(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint64_t> values;
  VByteReader reader(bytes);
  while (!reader.done()) values.push_back(reader.next());
  return values;
}

std::uint64_t VByteReader::next() {
  std::uint64_t value = 0;
  for (unsigned shift = 0;; shift += 7) {
    if (pos_ >= bytes_.size()) {
      throw CodecError("truncated vbyte value at byte " + std::to_string(pos_), pos_);
    }
    const std::uint8_t byte = bytes_[pos_++];
    const std::uint64_t payload = byte & 0x7F;
    // The tenth byte may only contribute the single remaining bit.
    if (shift == 63 && payload > 1) throw CodecError("vbyte value overflows 64 bits", pos_ - 1);
    value |= payload << shift;
    if ((byte & 0x80) == 0) return value;
    if (shift == 63) throw CodecError("vbyte value longer than 10 bytes", pos_ - 1);
  }
}

std::span<const std::uint8_t> VByteReader::take(std::size_t n) {
  if (n > bytes_.size() - pos_) throw CodecError("truncated byte run at " + std::to_string(pos_), pos_);
  auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

}  // namespace snapsearch
