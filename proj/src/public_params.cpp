#include "p3/public_params.hpp"

#include "p3/error.hpp"
#include "p3/hash.hpp"
#include "p3/zp.hpp"

namespace p3 {

namespace {
constexpr char kMagic[5] = "P3PP";
constexpr uint16_t kVersion = 1;
}  // namespace

Bytes PublicParams::serialize() const {
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u16(kVersion);
  group.serialize(w);
  w.u16(knn_dim);
  w.u64(match_modulus);
  return w.take();
}

PublicParams PublicParams::parse(std::span<const uint8_t> buf) {
  ByteReader r(buf);
  r.expect_magic(kMagic);
  if (r.u16() != kVersion) throw ParseError("unsupported parameter version");
  PublicParams p;
  p.group = GroupParams::parse(r);
  p.knn_dim = r.u16();
  p.match_modulus = r.u64();
  if (p.knn_dim < 3) throw ParseError("knn dimension too small");
  if (p.match_modulus != zp::kModulus) throw ParseError("unsupported match modulus");
  if (!r.done()) throw ParseError("trailing bytes after parameters");
  return p;
}

std::array<uint8_t, 32> PublicParams::digest() const { return sha256(serialize()); }

}  // namespace p3
