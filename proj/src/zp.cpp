#include "p3/zp.hpp"

#include "p3/error.hpp"

namespace p3 {

namespace zp {

uint64_t pow(uint64_t base, uint64_t exp) {
  uint64_t acc = 1;
  base = reduce(base);
  while (exp > 0) {
    if (exp & 1) acc = mul(acc, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return acc;
}

uint64_t inv(uint64_t a) {
  if (reduce(a) == 0) throw Error("zp::inv of zero");
  return pow(a, kModulus - 2);
}

uint64_t random_element(Rng& rng) { return rng.below(kModulus); }

}  // namespace zp

uint64_t zp_dot(const ZpVector& a, const ZpVector& b) {
  if (a.size() != b.size()) throw Error("zp_dot: dimension mismatch");
  uint64_t acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc = zp::add(acc, zp::mul(a[i], b[i]));
  return acc;
}

ZpVector ZpMatrix::mul_vec(const ZpVector& v) const {
  if (v.size() != dim_) throw Error("ZpMatrix::mul_vec: dimension mismatch");
  ZpVector out(dim_, 0);
  for (size_t r = 0; r < dim_; ++r) {
    uint64_t acc = 0;
    for (size_t c = 0; c < dim_; ++c) acc = zp::add(acc, zp::mul(at(r, c), v[c]));
    out[r] = acc;
  }
  return out;
}

ZpVector ZpMatrix::transpose_mul_vec(const ZpVector& v) const {
  if (v.size() != dim_) throw Error("ZpMatrix::transpose_mul_vec: dimension mismatch");
  ZpVector out(dim_, 0);
  for (size_t r = 0; r < dim_; ++r)
    for (size_t c = 0; c < dim_; ++c) out[c] = zp::add(out[c], zp::mul(at(r, c), v[r]));
  return out;
}

std::optional<ZpMatrix> ZpMatrix::inverse() const {
  size_t d = dim_;
  ZpMatrix work = *this;
  ZpMatrix inv(d);
  for (size_t i = 0; i < d; ++i) inv.at(i, i) = 1;

  for (size_t col = 0; col < d; ++col) {
    size_t pivot = col;
    while (pivot < d && work.at(pivot, col) == 0) ++pivot;
    if (pivot == d) return std::nullopt;
    if (pivot != col) {
      for (size_t c = 0; c < d; ++c) {
        std::swap(work.at(pivot, c), work.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
    }
    uint64_t pinv = zp::inv(work.at(col, col));
    for (size_t c = 0; c < d; ++c) {
      work.at(col, c) = zp::mul(work.at(col, c), pinv);
      inv.at(col, c) = zp::mul(inv.at(col, c), pinv);
    }
    for (size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      uint64_t f = work.at(r, col);
      if (f == 0) continue;
      for (size_t c = 0; c < d; ++c) {
        work.at(r, c) = zp::sub(work.at(r, c), zp::mul(f, work.at(col, c)));
        inv.at(r, c) = zp::sub(inv.at(r, c), zp::mul(f, inv.at(col, c)));
      }
    }
  }
  return inv;
}

ZpMatrix ZpMatrix::random(size_t dim, Rng& rng) {
  ZpMatrix m(dim);
  for (size_t r = 0; r < dim; ++r)
    for (size_t c = 0; c < dim; ++c) m.at(r, c) = zp::random_element(rng);
  return m;
}

std::pair<ZpMatrix, ZpMatrix> ZpMatrix::random_invertible(size_t dim, Rng& rng) {
  for (;;) {
    ZpMatrix m = random(dim, rng);
    if (auto inv = m.inverse()) return {std::move(m), std::move(*inv)};
  }
}

void ZpMatrix::serialize(ByteWriter& w) const {
  w.u16(static_cast<uint16_t>(dim_));
  for (uint64_t v : a_) w.u64(v);
}

ZpMatrix ZpMatrix::parse(ByteReader& r) {
  size_t dim = r.u16();
  ZpMatrix m(dim);
  for (size_t i = 0; i < dim * dim; ++i) {
    uint64_t v = r.u64();
    if (v >= zp::kModulus) throw ParseError("matrix entry out of field range");
    m.a_[i] = v;
  }
  return m;
}

}  // namespace p3
