#include "p3/knn.hpp"

#include "p3/error.hpp"

namespace p3 {

namespace {

void serialize_vec(ByteWriter& w, const ZpVector& v) {
  w.u16(static_cast<uint16_t>(v.size()));
  for (uint64_t e : v) w.u64(e);
}

ZpVector parse_vec(ByteReader& r) {
  size_t d = r.u16();
  ZpVector v(d);
  for (size_t i = 0; i < d; ++i) {
    uint64_t e = r.u64();
    if (e >= zp::kModulus) throw ParseError("vector entry out of field range");
    v[i] = e;
  }
  return v;
}

}  // namespace

void IndexKeywordId::serialize(ByteWriter& w) const {
  serialize_vec(w, part_a);
  serialize_vec(w, part_b);
}

IndexKeywordId IndexKeywordId::parse(ByteReader& r) {
  IndexKeywordId id;
  id.part_a = parse_vec(r);
  id.part_b = parse_vec(r);
  if (id.part_a.size() != id.part_b.size()) throw ParseError("keyword id halves differ");
  return id;
}

Bytes IndexKeywordId::bytes() const {
  ByteWriter w;
  serialize(w);
  return w.take();
}

void TrapdoorKeywordId::serialize(ByteWriter& w) const {
  serialize_vec(w, part_a);
  serialize_vec(w, part_b);
}

TrapdoorKeywordId TrapdoorKeywordId::parse(ByteReader& r) {
  TrapdoorKeywordId id;
  id.part_a = parse_vec(r);
  id.part_b = parse_vec(r);
  if (id.part_a.size() != id.part_b.size()) throw ParseError("keyword id halves differ");
  return id;
}

Bytes TrapdoorKeywordId::bytes() const {
  ByteWriter w;
  serialize(w);
  return w.take();
}

uint64_t knn_match_value(const TrapdoorKeywordId& y, const IndexKeywordId& z) {
  if (y.part_a.size() != z.part_a.size() || y.part_b.size() != z.part_b.size())
    throw Error("keyword id dimension mismatch");
  return zp::add(zp_dot(y.part_a, z.part_a), zp_dot(y.part_b, z.part_b));
}

bool knn_match(const TrapdoorKeywordId& y, const IndexKeywordId& z) {
  return knn_match_value(y, z) == 0;
}

ZpVector knn_power_vector(uint64_t t, size_t d) {
  ZpVector v(d);
  uint64_t acc = 1;
  for (size_t i = 0; i < d; ++i) {
    v[i] = acc;
    acc = zp::mul(acc, t);
  }
  return v;
}

ZpVector knn_poly_coeffs(const std::vector<uint64_t>& roots) {
  ZpVector coeffs{1};  // the constant polynomial 1
  for (uint64_t root : roots) {
    ZpVector next(coeffs.size() + 1, 0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] = zp::add(next[i + 1], coeffs[i]);               // x · coeffs
      next[i] = zp::sub(next[i], zp::mul(root, coeffs[i]));        // -root · coeffs
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

}  // namespace p3
