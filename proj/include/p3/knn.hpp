#pragma once

#include <cstdint>
#include <vector>

#include "p3/bytes.hpp"
#include "p3/zp.hpp"

namespace p3 {

// Encrypted keyword identifier stored in the secure index: the two matrix-
// encrypted halves of the power vector (t^0 … t^{d-1}).
struct IndexKeywordId {
  ZpVector part_a, part_b;

  void serialize(ByteWriter& w) const;
  static IndexKeywordId parse(ByteReader& r);
  Bytes bytes() const;
  bool operator==(const IndexKeywordId&) const = default;
};

// Encrypted keyword identifier carried in a trapdoor: the two halves of the
// coefficient vector of f(x) = (x - t)·∏(x - dummy_i).
struct TrapdoorKeywordId {
  ZpVector part_a, part_b;

  void serialize(ByteWriter& w) const;
  static TrapdoorKeywordId parse(ByteReader& r);
  Bytes bytes() const;
  bool operator==(const TrapdoorKeywordId&) const = default;
};

// y^T·z over Z_P; the matrices cancel, leaving A^T·B = f(t), which is zero
// exactly when the trapdoor keyword's PRF value is a root. Throws on
// dimension mismatch.
bool knn_match(const TrapdoorKeywordId& y, const IndexKeywordId& z);

// The raw inner-product value behind knn_match; equals the matrix-free
// A^T·B, which the oracle tests check directly.
uint64_t knn_match_value(const TrapdoorKeywordId& y, const IndexKeywordId& z);

// (t^0, t^1, …, t^{d-1}) over Z_P.
ZpVector knn_power_vector(uint64_t t, size_t d);

// Coefficients a_0 … a_k of the monic polynomial ∏(x - root_i), k = #roots.
ZpVector knn_poly_coeffs(const std::vector<uint64_t>& roots);

}  // namespace p3
