#include "p3/rng.hpp"

#include <openssl/rand.h>

#include <bit>
#include <cstring>

#include "p3/error.hpp"

namespace p3 {

namespace {

inline uint32_t rotl(uint32_t v, int c) { return std::rotl(v, c); }

void quarter_round(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
  a += b; d ^= a; d = rotl(d, 16);
  c += d; b ^= c; b = rotl(b, 12);
  a += b; d ^= a; d = rotl(d, 8);
  c += d; b ^= c; b = rotl(b, 7);
}

void chacha20_block(const std::array<uint32_t, 16>& in, std::array<uint8_t, 64>& out) {
  std::array<uint32_t, 16> x = in;
  for (int round = 0; round < 10; ++round) {
    quarter_round(x[0], x[4], x[8], x[12]);
    quarter_round(x[1], x[5], x[9], x[13]);
    quarter_round(x[2], x[6], x[10], x[14]);
    quarter_round(x[3], x[7], x[11], x[15]);
    quarter_round(x[0], x[5], x[10], x[15]);
    quarter_round(x[1], x[6], x[11], x[12]);
    quarter_round(x[2], x[7], x[8], x[13]);
    quarter_round(x[3], x[4], x[9], x[14]);
  }
  for (int i = 0; i < 16; ++i) {
    uint32_t v = x[i] + in[i];
    out[4 * i + 0] = static_cast<uint8_t>(v);
    out[4 * i + 1] = static_cast<uint8_t>(v >> 8);
    out[4 * i + 2] = static_cast<uint8_t>(v >> 16);
    out[4 * i + 3] = static_cast<uint8_t>(v >> 24);
  }
}

constexpr std::array<uint32_t, 4> kSigma = {0x61707865, 0x3320646e, 0x79622d32, 0x6b206574};

}  // namespace

Rng::Rng() {
  std::array<uint8_t, 32> key;
  if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1)
    throw Error("OS entropy source failed");
  *this = Rng(key);
}

Rng::Rng(uint64_t seed) {
  std::array<uint8_t, 32> key{};
  for (int i = 0; i < 8; ++i) key[i] = static_cast<uint8_t>(seed >> (8 * i));
  *this = Rng(key);
}

Rng::Rng(const std::array<uint8_t, 32>& key) {
  for (int i = 0; i < 4; ++i) state_[i] = kSigma[i];
  for (int i = 0; i < 8; ++i) {
    state_[4 + i] = static_cast<uint32_t>(key[4 * i]) |
                    static_cast<uint32_t>(key[4 * i + 1]) << 8 |
                    static_cast<uint32_t>(key[4 * i + 2]) << 16 |
                    static_cast<uint32_t>(key[4 * i + 3]) << 24;
  }
  // counter (state_[12..13]) and nonce (state_[14..15]) start at zero
  used_ = 64;
}

void Rng::refill() {
  chacha20_block(state_, block_);
  if (++state_[12] == 0) ++state_[13];
  used_ = 0;
}

void Rng::fill(std::span<uint8_t> out) {
  size_t off = 0;
  while (off < out.size()) {
    if (used_ == 64) refill();
    size_t n = std::min(out.size() - off, 64 - used_);
    std::memcpy(out.data() + off, block_.data() + used_, n);
    used_ += n;
    off += n;
  }
}

Bytes Rng::bytes(size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

uint64_t Rng::next_u64() {
  std::array<uint8_t, 8> b;
  fill(b);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | b[i];
  return v;
}

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) throw Error("Rng::below: zero bound");
  // Rejection sampling over the largest multiple of bound.
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

mpz_class Rng::below(const mpz_class& bound) {
  if (bound <= 0) throw Error("Rng::below: nonpositive bound");
  size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  size_t nbytes = (bits + 7) / 8;
  Bytes buf(nbytes);
  mpz_class v;
  for (;;) {
    fill(buf);
    // Mask excess high bits so the rejection rate stays below 1/2.
    if (bits % 8 != 0) buf[0] &= static_cast<uint8_t>((1u << (bits % 8)) - 1);
    mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
    if (v < bound) return v;
  }
}

Rng Rng::fork() {
  std::array<uint8_t, 32> key;
  fill(key);
  return Rng(key);
}

}  // namespace p3
