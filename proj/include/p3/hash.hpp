#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "p3/bytes.hpp"

namespace p3 {

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);

std::array<uint8_t, 32> hmac_sha256(std::span<const uint8_t> key,
                                    std::span<const uint8_t> data);
std::array<uint8_t, 32> hmac_sha256(std::span<const uint8_t> key, std::string_view data);

uint32_t crc32(std::span<const uint8_t> data);

}  // namespace p3
