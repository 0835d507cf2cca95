#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "p3/bytes.hpp"
#include "p3/rng.hpp"

namespace p3 {

// Arithmetic in the public match field Z_P. The keyword-matching layer needs
// an exact "inner product equals zero" test, so everything (PRF outputs,
// vector splits, matrices) lives in a fixed prime field rather than in
// floating point. P is the Mersenne prime 2^61 - 1.
namespace zp {

inline constexpr uint64_t kModulus = (uint64_t{1} << 61) - 1;

inline uint64_t reduce(uint64_t v) { return v >= kModulus ? v - kModulus : v; }

inline uint64_t add(uint64_t a, uint64_t b) { return reduce(a + b); }

inline uint64_t sub(uint64_t a, uint64_t b) { return reduce(a + kModulus - b); }

inline uint64_t neg(uint64_t a) { return a == 0 ? 0 : kModulus - a; }

inline uint64_t mul(uint64_t a, uint64_t b) {
  unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
  // Mersenne reduction: t = hi*2^61 + lo ≡ hi + lo (mod 2^61 - 1).
  uint64_t lo = static_cast<uint64_t>(t) & kModulus;
  uint64_t hi = static_cast<uint64_t>(t >> 61);
  return reduce(lo + hi);
}

uint64_t pow(uint64_t base, uint64_t exp);

// Inverse via Fermat; a must be nonzero.
uint64_t inv(uint64_t a);

// Uniform field element.
uint64_t random_element(Rng& rng);

}  // namespace zp

using ZpVector = std::vector<uint64_t>;

// Inner product over Z_P.
uint64_t zp_dot(const ZpVector& a, const ZpVector& b);

// Dense square matrix over Z_P, row-major.
class ZpMatrix {
 public:
  ZpMatrix() = default;
  explicit ZpMatrix(size_t dim) : dim_(dim), a_(dim * dim, 0) {}

  size_t dim() const { return dim_; }
  uint64_t& at(size_t r, size_t c) { return a_[r * dim_ + c]; }
  uint64_t at(size_t r, size_t c) const { return a_[r * dim_ + c]; }
  bool operator==(const ZpMatrix&) const = default;

  ZpVector mul_vec(const ZpVector& v) const;
  // M^T · v without materializing the transpose.
  ZpVector transpose_mul_vec(const ZpVector& v) const;

  // Gauss-Jordan over Z_P; nullopt when singular.
  std::optional<ZpMatrix> inverse() const;

  static ZpMatrix random(size_t dim, Rng& rng);
  // Samples until invertible (singularity probability ~ dim/P per draw) and
  // returns the matrix together with its inverse.
  static std::pair<ZpMatrix, ZpMatrix> random_invertible(size_t dim, Rng& rng);

  void serialize(ByteWriter& w) const;
  static ZpMatrix parse(ByteReader& r);

 private:
  size_t dim_ = 0;
  std::vector<uint64_t> a_;
};

}  // namespace p3
