#pragma once

#include <cstdint>
#include <span>

namespace snapsearch {

// CRC-32C (Castagnoli). crc32c("123456789") == 0xE3069283.
std::uint32_t crc32c(std::span<const std::uint8_t> bytes);

}  // namespace snapsearch
