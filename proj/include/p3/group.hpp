#pragma once

#include <gmpxx.h>

#include "p3/bytes.hpp"
#include "p3/rng.hpp"

namespace p3 {

// Public description of the composite-order bilinear group. The subgroup
// order n = p·q is published; its factorization stays with the owner.
struct GroupParams {
  mpz_class n;         // composite subgroup order
  mpz_class q_field;   // field characteristic; q_field ≡ 3 (mod 4), n | q_field + 1
  mpz_class cofactor;  // (q_field + 1) / n

  // Fixed serialized width of one field element, in bytes.
  size_t fe_width() const;

  bool operator==(const GroupParams&) const = default;
  void serialize(ByteWriter& w) const;
  static GroupParams parse(ByteReader& r);
};

// Affine point on the curve, or the point at infinity. Canonical serialized
// form is an identity flag byte followed by fixed-width (x, y).
struct GroupElement {
  mpz_class x{0}, y{0};
  bool infinity = true;
  bool operator==(const GroupElement&) const = default;
};

// Element of the target group: a + b·i in F_{q²} = F_q[i], i² = −1.
struct PairingValue {
  mpz_class a{1}, b{0};
  bool operator==(const PairingValue&) const = default;
  bool is_identity() const { return a == 1 && b == 0; }
};

// The supersingular curve y² = x³ + x over F_q with q ≡ 3 (mod 4).
// #E(F_q) = q + 1 and the group is cyclic, so cofactor multiplication lands
// in the order-n subgroup. The pairing is the reduced Tate pairing composed
// with the distortion map (x, y) ↦ (−x, i·y); values live in F_{q²}. Because
// n | q + 1, the final exponent (q² − 1)/n factors as (q − 1) · cofactor:
// one conjugate-divide plus a short exponentiation. Vertical-line factors of
// the Miller loop take values in F_q* and die under the q − 1 part, so they
// are skipped outright.
class CurveGroup {
 public:
  explicit CurveGroup(GroupParams params);

  const GroupParams& params() const { return params_; }
  const mpz_class& field() const { return params_.q_field; }
  const mpz_class& order() const { return params_.n; }

  GroupElement identity() const { return {}; }
  bool is_on_curve(const GroupElement& p) const;
  bool in_subgroup(const GroupElement& p) const;

  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  GroupElement mul(const GroupElement& base, const mpz_class& k) const;

  // Uniform non-identity element of the order-n subgroup.
  GroupElement sample(Rng& rng) const;

  PairingValue pairing(const GroupElement& p, const GroupElement& q) const;
  PairingValue gt_identity() const { return {}; }
  PairingValue gt_mul(const PairingValue& u, const PairingValue& v) const;
  PairingValue gt_pow(const PairingValue& u, const mpz_class& e) const;

  void serialize(const GroupElement& p, ByteWriter& w) const;
  GroupElement parse_element(ByteReader& r) const;
  Bytes element_bytes(const GroupElement& p) const;
  void serialize(const PairingValue& v, ByteWriter& w) const;
  PairingValue parse_pairing_value(ByteReader& r) const;

 private:
  mpz_class fe_mod(const mpz_class& v) const;
  mpz_class fe_inv(const mpz_class& v) const;
  // Slope-based chord/tangent line through a and b, evaluated at the
  // distortion image (xt, i·yt); returns 1 for vertical lines.
  void line_eval(const GroupElement& a, const GroupElement& b, const mpz_class& xt,
                 const mpz_class& yt, mpz_class& out_re, mpz_class& out_im) const;

  GroupParams params_;
  mpz_class sqrt_exp_;  // (q_field + 1) / 4
  size_t n_bits_;
};

// Fixed-width, length-prefixed big-endian integer encoding shared by every
// serialized structure in the project.
void write_fe(ByteWriter& w, const mpz_class& v, size_t width);
mpz_class read_fe(ByteReader& r, size_t width, const mpz_class& bound);

}  // namespace p3
