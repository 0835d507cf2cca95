#pragma once

#include <array>
#include <cstdint>
#include <span>

#include <gmpxx.h>

#include "p3/bytes.hpp"

namespace p3 {

// Deterministic random stream (ChaCha20 keystream). Every randomized
// operation in this project takes an Rng& so that key generation, index
// encryption and trapdoor generation are reproducible from a seed, which the
// golden-determinism tests and the bench harness rely on. Construct from OS
// entropy for real use, from a seed for reproducible runs.
//
// Not thread-safe; use one Rng per thread.
class Rng {
 public:
  // Keyed from OS entropy.
  Rng();
  // Deterministic stream from a 64-bit seed (expanded into the key).
  explicit Rng(uint64_t seed);
  // Deterministic stream from a full 32-byte key.
  explicit Rng(const std::array<uint8_t, 32>& key);

  void fill(std::span<uint8_t> out);
  Bytes bytes(size_t n);
  uint8_t bit() { return static_cast<uint8_t>(next_u64() & 1); }
  uint64_t next_u64();
  // Uniform in [0, bound) by rejection; bound > 0.
  uint64_t below(uint64_t bound);
  // Uniform mpz in [0, bound) by rejection; bound > 0.
  mpz_class below(const mpz_class& bound);
  // Independent child stream (for spawning per-thread generators).
  Rng fork();

 private:
  void refill();

  std::array<uint32_t, 16> state_{};
  std::array<uint8_t, 64> block_{};
  size_t used_ = 64;
};

}  // namespace p3
