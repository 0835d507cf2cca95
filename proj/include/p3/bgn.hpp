#pragma once

#include <array>
#include <vector>

#include "p3/group.hpp"
#include "p3/rng.hpp"

namespace p3 {

// Encryptor-side public key: group description plus the two public bases.
// The cloud server never sees g or h; it works from GroupParams alone.
struct BgnPublicKey {
  GroupParams params;
  GroupElement g;      // order n
  GroupElement h;      // order p; blinds the message term
  uint64_t msg_bound;  // plaintexts must stay below this for dlog recovery

  void serialize(ByteWriter& w) const;
  static BgnPublicKey parse(ByteReader& r);
};

// Fixed-base scalar multiplication with 4-bit windows. Encryption performs
// two scalar multiplications on the same bases every time, so the tables pay
// for themselves after a handful of ciphertexts.
class FixedBaseTable {
 public:
  FixedBaseTable() = default;
  FixedBaseTable(const CurveGroup& group, const GroupElement& base, size_t max_bits);

  GroupElement mul(const CurveGroup& group, const mpz_class& k) const;

 private:
  std::vector<std::array<GroupElement, 16>> windows_;
};

// Public-side BGN operations: probabilistic encryption and the homomorphic
// group operations. Decryption and the dispersal factor live with the owner.
class BgnEncryptor {
 public:
  explicit BgnEncryptor(BgnPublicKey pk);

  const BgnPublicKey& pk() const { return pk_; }
  const CurveGroup& group() const { return group_; }

  // c = g^m · h^r with r uniform in [0, n).
  GroupElement encrypt(uint64_t m, Rng& rng) const;

 private:
  BgnPublicKey pk_;
  CurveGroup group_;
  FixedBaseTable g_table_;
  FixedBaseTable h_table_;
};

// E(a) · E(b) encrypts a + b.
GroupElement hom_add(const CurveGroup& group, const GroupElement& c1,
                     const GroupElement& c2);

// Group inverse; E(a)^{-1} encrypts -a.
GroupElement hom_neg(const CurveGroup& group, const GroupElement& c);

// Pairing-based test for "c encrypts 0", given a dispersal factor psi from
// the owner. One pairing, no decryption.
bool zero_test(const CurveGroup& group, const GroupElement& c, const GroupElement& psi);

}  // namespace p3
