#pragma once

#include <cstdint>
#include <span>

#include "p3/bytes.hpp"
#include "p3/rng.hpp"

namespace p3 {

// Keyed permutation on 64-bit document identifiers: a 4-round balanced
// Feistel network with an HMAC-SHA256 round function. Deterministic and
// injective, so distinct plaintext ids always map to distinct encrypted ids.
// Valid ids are positive int64; padding counters are negative, which keeps
// them in a reserved sub-domain the owner can recognize after inversion.
class FeistelPrp {
 public:
  explicit FeistelPrp(Bytes key);

  uint64_t encrypt(uint64_t v) const;
  uint64_t decrypt(uint64_t v) const;

 private:
  uint32_t round(unsigned idx, uint32_t half) const;
  Bytes key_;
};

// AES-256-GCM with a random 12-byte nonce: nonce || ciphertext || tag(16).
Bytes aead_seal(std::span<const uint8_t> key, std::span<const uint8_t> plaintext,
                Rng& rng);
// Throws on authentication failure.
Bytes aead_open(std::span<const uint8_t> key, std::span<const uint8_t> sealed);

}  // namespace p3
