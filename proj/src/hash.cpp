#include "p3/hash.hpp"

#include <openssl/hmac.h>
#include <openssl/sha.h>
#include <zlib.h>

#include "p3/error.hpp"

namespace p3 {

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
  std::array<uint8_t, 32> out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

std::array<uint8_t, 32> hmac_sha256(std::span<const uint8_t> key,
                                    std::span<const uint8_t> data) {
  std::array<uint8_t, 32> out;
  unsigned int len = out.size();
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
           data.size(), out.data(), &len) == nullptr || len != 32)
    throw Error("HMAC-SHA256 failed");
  return out;
}

std::array<uint8_t, 32> hmac_sha256(std::span<const uint8_t> key, std::string_view data) {
  return hmac_sha256(key, std::span<const uint8_t>(
                              reinterpret_cast<const uint8_t*>(data.data()), data.size()));
}

uint32_t crc32(std::span<const uint8_t> data) {
  return static_cast<uint32_t>(::crc32(0L, data.data(), static_cast<uInt>(data.size())));
}

}  // namespace p3
