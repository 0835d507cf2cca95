#include "p3/bgn.hpp"

#include "p3/error.hpp"

namespace p3 {

void BgnPublicKey::serialize(ByteWriter& w) const {
  params.serialize(w);
  CurveGroup group(params);
  group.serialize(g, w);
  group.serialize(h, w);
  w.u64(msg_bound);
}

BgnPublicKey BgnPublicKey::parse(ByteReader& r) {
  BgnPublicKey pk;
  pk.params = GroupParams::parse(r);
  CurveGroup group(pk.params);
  pk.g = group.parse_element(r);
  pk.h = group.parse_element(r);
  pk.msg_bound = r.u64();
  if (pk.g.infinity || pk.h.infinity) throw ParseError("degenerate public bases");
  return pk;
}

FixedBaseTable::FixedBaseTable(const CurveGroup& group, const GroupElement& base,
                               size_t max_bits) {
  size_t nwindows = (max_bits + 3) / 4;
  windows_.resize(nwindows);
  GroupElement window_base = base;  // base · 16^i for window i
  for (size_t i = 0; i < nwindows; ++i) {
    auto& row = windows_[i];
    row[0] = group.identity();
    for (size_t j = 1; j < 16; ++j) row[j] = group.add(row[j - 1], window_base);
    if (i + 1 < nwindows) window_base = group.add(row[15], window_base);  // ·16
  }
}

GroupElement FixedBaseTable::mul(const CurveGroup& group, const mpz_class& k) const {
  if (k < 0) throw Error("negative scalar");
  size_t bits = k == 0 ? 0 : mpz_sizeinbase(k.get_mpz_t(), 2);
  if ((bits + 3) / 4 > windows_.size()) throw Error("scalar exceeds table range");
  GroupElement acc = group.identity();
  for (size_t i = 0; 4 * i < bits; ++i) {
    unsigned digit = 0;
    for (unsigned b = 0; b < 4; ++b)
      digit |= mpz_tstbit(k.get_mpz_t(), 4 * i + b) << b;
    if (digit != 0) acc = group.add(acc, windows_[i][digit]);
  }
  return acc;
}

BgnEncryptor::BgnEncryptor(BgnPublicKey pk)
    : pk_(std::move(pk)),
      group_(pk_.params),
      g_table_(group_, pk_.g,
               mpz_sizeinbase(mpz_class(pk_.msg_bound).get_mpz_t(), 2) + 1),
      h_table_(group_, pk_.h, mpz_sizeinbase(pk_.params.n.get_mpz_t(), 2) + 1) {}

GroupElement BgnEncryptor::encrypt(uint64_t m, Rng& rng) const {
  if (m >= pk_.msg_bound) throw Error("plaintext exceeds message bound");
  mpz_class r = rng.below(pk_.params.n);
  GroupElement gm = g_table_.mul(group_, mpz_class(static_cast<unsigned long>(m)));
  GroupElement hr = h_table_.mul(group_, r);
  return group_.add(gm, hr);
}

GroupElement hom_add(const CurveGroup& group, const GroupElement& c1,
                     const GroupElement& c2) {
  return group.add(c1, c2);
}

GroupElement hom_neg(const CurveGroup& group, const GroupElement& c) {
  return group.neg(c);
}

bool zero_test(const CurveGroup& group, const GroupElement& c, const GroupElement& psi) {
  if (psi.infinity) throw Error("dispersal factor is the identity");
  if (c.infinity) return true;  // identity encrypts 0 with r = 0
  return group.pairing(c, psi).is_identity();
}

}  // namespace p3
