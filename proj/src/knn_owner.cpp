#include "p3/knn_owner.hpp"

#include "p3/bytes.hpp"
#include "p3/error.hpp"
#include "p3/hash.hpp"

namespace p3 {

namespace {

constexpr size_t kPrfKeyLen = 32;

// Dummy keyword tokens carry a '#' prefix; the tokenizer only ever emits
// lowercase alphanumerics, so dummies can never collide with corpus keywords.
std::string random_dummy_token(Rng& rng) {
  return "#" + to_hex(rng.bytes(16));
}

}  // namespace

KnnSecrets KnnSecrets::generate(uint16_t d, Rng& rng) {
  if (d < 3) throw Error("knn dimension must be at least 3");
  KnnSecrets s;
  s.d = d;
  s.split_bits.resize(d);
  for (auto& b : s.split_bits) b = rng.bit();
  std::tie(s.m1, s.m1_inv) = ZpMatrix::random_invertible(d, rng);
  std::tie(s.m2, s.m2_inv) = ZpMatrix::random_invertible(d, rng);
  s.prf_key = rng.bytes(kPrfKeyLen);
  return s;
}

void KnnSecrets::serialize(ByteWriter& w) const {
  w.u16(d);
  w.raw(split_bits);
  m1.serialize(w);
  m2.serialize(w);
  w.blob(prf_key);
}

KnnSecrets KnnSecrets::parse(ByteReader& r) {
  KnnSecrets s;
  s.d = r.u16();
  if (s.d < 3) throw ParseError("knn dimension too small");
  auto bits = r.raw(s.d);
  s.split_bits.assign(bits.begin(), bits.end());
  for (uint8_t b : s.split_bits)
    if (b > 1) throw ParseError("split indicator not a bit");
  s.m1 = ZpMatrix::parse(r);
  s.m2 = ZpMatrix::parse(r);
  if (s.m1.dim() != s.d || s.m2.dim() != s.d) throw ParseError("matrix dimension mismatch");
  auto inv1 = s.m1.inverse();
  auto inv2 = s.m2.inverse();
  if (!inv1 || !inv2) throw ParseError("stored matrix not invertible");
  s.m1_inv = std::move(*inv1);
  s.m2_inv = std::move(*inv2);
  auto key = r.blob();
  s.prf_key.assign(key.begin(), key.end());
  return s;
}

uint64_t prf_eval(std::span<const uint8_t> prf_key, std::string_view w) {
  // Truncate HMAC output into Z_P; resample via a counter on the rare zero.
  for (uint32_t ctr = 0;; ++ctr) {
    ByteWriter msg;
    msg.u32(ctr);
    msg.raw(w.data(), w.size());
    auto mac = hmac_sha256(prf_key, msg.data());
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | mac[i];
    v %= zp::kModulus;
    if (v != 0) return v;
  }
}

IndexKeywordId enc_keyword_for_index(const KnnSecrets& secrets, std::string_view w,
                                     Rng& rng) {
  uint64_t t = prf_eval(secrets.prf_key, w);
  ZpVector b = knn_power_vector(t, secrets.d);
  ZpVector ba(secrets.d), bb(secrets.d);
  for (size_t i = 0; i < secrets.d; ++i) {
    if (secrets.split_bits[i] == 1) {
      uint64_t r = zp::random_element(rng);
      ba[i] = r;
      bb[i] = zp::sub(b[i], r);
    } else {
      ba[i] = b[i];
      bb[i] = b[i];
    }
  }
  return {secrets.m1.transpose_mul_vec(ba), secrets.m2.transpose_mul_vec(bb)};
}

TrapdoorKeywordId enc_keyword_for_trapdoor(const KnnSecrets& secrets, std::string_view w,
                                           Rng& rng) {
  std::vector<std::string> dummies;
  dummies.reserve(secrets.d - 2);
  for (size_t i = 0; i + 2 < secrets.d; ++i) dummies.push_back(random_dummy_token(rng));
  return enc_keyword_for_trapdoor(secrets, w, dummies, rng);
}

TrapdoorKeywordId enc_keyword_for_trapdoor(const KnnSecrets& secrets, std::string_view w,
                                           const std::vector<std::string>& dummies,
                                           Rng& rng) {
  if (dummies.size() + 2 != secrets.d) throw Error("need exactly d-2 dummy keywords");
  std::vector<uint64_t> roots;
  roots.reserve(secrets.d - 1);
  roots.push_back(prf_eval(secrets.prf_key, w));
  for (const auto& dummy : dummies) roots.push_back(prf_eval(secrets.prf_key, dummy));

  ZpVector a = knn_poly_coeffs(roots);  // degree d-1, so d coefficients
  ZpVector aa(secrets.d), ab(secrets.d);
  for (size_t i = 0; i < secrets.d; ++i) {
    if (secrets.split_bits[i] == 0) {  // complementary to the index rule
      uint64_t r = zp::random_element(rng);
      aa[i] = r;
      ab[i] = zp::sub(a[i], r);
    } else {
      aa[i] = a[i];
      ab[i] = a[i];
    }
  }
  return {secrets.m1_inv.mul_vec(aa), secrets.m2_inv.mul_vec(ab)};
}

}  // namespace p3
