#pragma once

#include <span>
#include <string_view>

#include "p3/knn.hpp"
#include "p3/rng.hpp"

namespace p3 {

// Owner-held secrets of the keyword-matching layer: the split indicator S,
// the two invertible matrices (kept together with their inverses), and the
// PRF key mapping keywords into Z_P.
struct KnnSecrets {
  uint16_t d = 0;
  std::vector<uint8_t> split_bits;  // S, one 0/1 byte per dimension
  ZpMatrix m1, m2;
  ZpMatrix m1_inv, m2_inv;
  Bytes prf_key;

  static KnnSecrets generate(uint16_t d, Rng& rng);

  void serialize(ByteWriter& w) const;
  static KnnSecrets parse(ByteReader& r);
};

// Keyed map from keyword strings into [1, P-1]; deterministic per (key, w).
uint64_t prf_eval(std::span<const uint8_t> prf_key, std::string_view w);

// Algorithm-1 side: power vector of prf(w), randomly split per S (S(i)=1
// splits, S(i)=0 copies), halves encrypted with M1^T / M2^T. Fresh splits
// every call, so repeated ids for one keyword differ.
IndexKeywordId enc_keyword_for_index(const KnnSecrets& secrets, std::string_view w,
                                     Rng& rng);

// Algorithm-2 side: coefficients of (x - prf(w))·∏(x - prf(dummy_i)) with
// d-2 fresh dummy tokens, split with the complementary rule (S(i)=0 splits,
// S(i)=1 copies), halves encrypted with M1^{-1} / M2^{-1}. The fresh dummies
// are what makes equal queries unlinkable.
TrapdoorKeywordId enc_keyword_for_trapdoor(const KnnSecrets& secrets, std::string_view w,
                                           Rng& rng);

// Same with caller-chosen dummy tokens (|dummies| must be d-2); the oracle
// tests reconstruct the coefficient vector from these.
TrapdoorKeywordId enc_keyword_for_trapdoor(const KnnSecrets& secrets, std::string_view w,
                                           const std::vector<std::string>& dummies,
                                           Rng& rng);

}  // namespace p3
