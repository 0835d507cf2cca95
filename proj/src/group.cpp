#include "p3/group.hpp"

#include "p3/error.hpp"

namespace p3 {

namespace {

// Arithmetic in F_{q²} = F_q[i], i² = −1 (q ≡ 3 mod 4 makes x² + 1
// irreducible). Only what the Miller loop needs.
struct Fq2 {
  mpz_class a, b;
};

Fq2 fq2_mul(const Fq2& u, const Fq2& v, const mpz_class& q) {
  mpz_class re = (u.a * v.a - u.b * v.b) % q;
  if (re < 0) re += q;
  mpz_class im = (u.a * v.b + u.b * v.a) % q;
  return {re, im};
}

Fq2 fq2_sqr(const Fq2& u, const mpz_class& q) {
  mpz_class re = (u.a * u.a - u.b * u.b) % q;
  if (re < 0) re += q;
  mpz_class im = (2 * u.a * u.b) % q;
  return {re, im};
}

Fq2 fq2_conj(const Fq2& u, const mpz_class& q) {
  return {u.a, u.b == 0 ? mpz_class(0) : mpz_class(q - u.b)};
}

Fq2 fq2_inv(const Fq2& u, const mpz_class& q) {
  // (a + bi)^{-1} = (a - bi) / (a² + b²)
  mpz_class norm = (u.a * u.a + u.b * u.b) % q;
  mpz_class d;
  if (mpz_invert(d.get_mpz_t(), norm.get_mpz_t(), q.get_mpz_t()) == 0)
    throw Error("F_q2 inverse of zero");
  mpz_class re = (u.a * d) % q;
  mpz_class im = u.b == 0 ? mpz_class(0) : mpz_class(((q - u.b) * d) % q);
  return {re, im};
}

Fq2 fq2_pow(Fq2 base, const mpz_class& e, const mpz_class& q) {
  Fq2 acc{1, 0};
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    acc = fq2_sqr(acc, q);
    if (mpz_tstbit(e.get_mpz_t(), i)) acc = fq2_mul(acc, base, q);
  }
  return acc;
}

}  // namespace

size_t GroupParams::fe_width() const {
  return (mpz_sizeinbase(q_field.get_mpz_t(), 2) + 7) / 8;
}

void GroupParams::serialize(ByteWriter& w) const {
  size_t width = fe_width();
  w.u16(static_cast<uint16_t>(width));
  write_fe(w, n, width);
  write_fe(w, q_field, width);
  write_fe(w, cofactor, width);
}

GroupParams GroupParams::parse(ByteReader& r) {
  size_t width = r.u16();
  mpz_class unbounded = mpz_class(1) << static_cast<unsigned long>(8 * width);
  GroupParams p;
  p.n = read_fe(r, width, unbounded);
  p.q_field = read_fe(r, width, unbounded);
  p.cofactor = read_fe(r, width, unbounded);
  if (p.n < 2 || p.q_field < 3 || p.cofactor < 1)
    throw ParseError("degenerate group parameters");
  if (p.q_field % 4 != 3) throw ParseError("field characteristic not 3 mod 4");
  if (p.n * p.cofactor != p.q_field + 1) throw ParseError("cofactor mismatch");
  if (p.fe_width() != width) throw ParseError("field width mismatch");
  return p;
}

void write_fe(ByteWriter& w, const mpz_class& v, size_t width) {
  if (v < 0) throw Error("write_fe: negative value");
  size_t nbytes = v == 0 ? 0 : (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  if (nbytes > width) throw Error("write_fe: value exceeds width");
  w.u32(static_cast<uint32_t>(width));
  Bytes buf(width, 0);
  if (nbytes > 0) {
    size_t count = 0;
    mpz_export(buf.data() + (width - nbytes), &count, 1, 1, 1, 0, v.get_mpz_t());
  }
  w.raw(buf);
}

mpz_class read_fe(ByteReader& r, size_t width, const mpz_class& bound) {
  uint32_t len = r.u32();
  if (len != width) throw ParseError("field element width mismatch");
  auto buf = r.raw(width);
  mpz_class v;
  mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
  if (v >= bound) throw ParseError("field element out of range");
  return v;
}

CurveGroup::CurveGroup(GroupParams params) : params_(std::move(params)) {
  if (params_.q_field % 4 != 3) throw Error("field characteristic must be 3 mod 4");
  if ((params_.q_field + 1) % params_.n != 0) throw Error("n must divide q_field + 1");
  if (params_.cofactor * params_.n != params_.q_field + 1) throw Error("bad cofactor");
  sqrt_exp_ = (params_.q_field + 1) / 4;
  n_bits_ = mpz_sizeinbase(params_.n.get_mpz_t(), 2);
}

mpz_class CurveGroup::fe_mod(const mpz_class& v) const {
  mpz_class r = v % params_.q_field;
  if (r < 0) r += params_.q_field;
  return r;
}

mpz_class CurveGroup::fe_inv(const mpz_class& v) const {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), v.get_mpz_t(), params_.q_field.get_mpz_t()) == 0)
    throw Error("field inverse of zero");
  return out;
}

bool CurveGroup::is_on_curve(const GroupElement& p) const {
  if (p.infinity) return true;
  if (p.x < 0 || p.x >= params_.q_field || p.y < 0 || p.y >= params_.q_field)
    return false;
  mpz_class lhs = (p.y * p.y) % params_.q_field;
  mpz_class rhs = fe_mod(p.x * p.x * p.x + p.x);
  return lhs == rhs;
}

bool CurveGroup::in_subgroup(const GroupElement& p) const {
  if (!is_on_curve(p)) return false;
  return mul(p, params_.n).infinity;
}

GroupElement CurveGroup::neg(const GroupElement& a) const {
  if (a.infinity) return a;
  return {a.x, a.y == 0 ? mpz_class(0) : mpz_class(params_.q_field - a.y), false};
}

GroupElement CurveGroup::add(const GroupElement& a, const GroupElement& b) const {
  if (a.infinity) return b;
  if (b.infinity) return a;
  const mpz_class& q = params_.q_field;
  mpz_class slope;
  if (a.x == b.x) {
    if ((a.y + b.y) % q == 0) return identity();  // b == -a, covers y == 0
    // tangent: (3x² + 1) / (2y)
    slope = fe_mod((3 * a.x * a.x + 1) * fe_inv(fe_mod(2 * a.y)));
  } else {
    slope = fe_mod((b.y - a.y) * fe_inv(fe_mod(b.x - a.x)));
  }
  mpz_class x3 = fe_mod(slope * slope - a.x - b.x);
  mpz_class y3 = fe_mod(slope * (a.x - x3) - a.y);
  return {x3, y3, false};
}

GroupElement CurveGroup::mul(const GroupElement& base, const mpz_class& k) const {
  if (k < 0) throw Error("negative scalar");
  if (k == 0 || base.infinity) return identity();
  GroupElement acc = identity();
  size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    acc = add(acc, acc);
    if (mpz_tstbit(k.get_mpz_t(), i)) acc = add(acc, base);
  }
  return acc;
}

GroupElement CurveGroup::sample(Rng& rng) const {
  const mpz_class& q = params_.q_field;
  for (;;) {
    mpz_class x = rng.below(q);
    mpz_class rhs = fe_mod(x * x * x + x);
    if (rhs == 0) continue;
    mpz_class y;
    mpz_powm(y.get_mpz_t(), rhs.get_mpz_t(), sqrt_exp_.get_mpz_t(), q.get_mpz_t());
    if ((y * y) % q != rhs) continue;  // rhs was a non-residue
    if (rng.bit()) y = q - y;
    GroupElement p = mul(GroupElement{x, y, false}, params_.cofactor);
    if (!p.infinity) return p;
  }
}

void CurveGroup::line_eval(const GroupElement& a, const GroupElement& b,
                           const mpz_class& xt, const mpz_class& yt,
                           mpz_class& out_re, mpz_class& out_im) const {
  // Vertical lines evaluate inside F_q* and vanish in the final
  // exponentiation; report them as 1.
  if (a.infinity || b.infinity) {
    out_re = 1;
    out_im = 0;
    return;
  }
  const mpz_class& q = params_.q_field;
  mpz_class slope;
  if (a.x == b.x) {
    if (a.y != b.y || a.y == 0) {
      out_re = 1;
      out_im = 0;
      return;
    }
    slope = fe_mod((3 * a.x * a.x + 1) * fe_inv(fe_mod(2 * a.y)));
  } else {
    slope = fe_mod((b.y - a.y) * fe_inv(fe_mod(b.x - a.x)));
  }
  // Line Y − a.y − m(X − a.x) at (xt, i·yt): real −(a.y + m(xt − a.x)), imag yt.
  out_re = fe_mod(-(a.y + slope * (xt - a.x)));
  out_im = yt;
}

PairingValue CurveGroup::pairing(const GroupElement& p, const GroupElement& q_elem) const {
  if (p.infinity || q_elem.infinity) return gt_identity();
  if (p.y == 0 || q_elem.y == 0) throw Error("pairing input outside odd-order subgroup");
  const mpz_class& q = params_.q_field;

  // Distortion image of the second argument: (−x, i·y).
  mpz_class xt = q_elem.x == 0 ? mpz_class(0) : mpz_class(q - q_elem.x);
  const mpz_class& yt = q_elem.y;

  Fq2 f{1, 0};
  GroupElement v = p;
  mpz_class lre, lim;
  for (size_t i = n_bits_ - 1; i-- > 0;) {
    line_eval(v, v, xt, yt, lre, lim);
    f = fq2_mul(fq2_sqr(f, q), Fq2{lre, lim}, q);
    v = add(v, v);
    if (mpz_tstbit(params_.n.get_mpz_t(), i)) {
      line_eval(v, p, xt, yt, lre, lim);
      f = fq2_mul(f, Fq2{lre, lim}, q);
      v = add(v, p);
    }
  }
  // Final exponentiation (q² − 1)/n = (q − 1) · cofactor.
  Fq2 out = fq2_mul(fq2_conj(f, q), fq2_inv(f, q), q);
  out = fq2_pow(out, params_.cofactor, q);
  return {out.a, out.b};
}

PairingValue CurveGroup::gt_mul(const PairingValue& u, const PairingValue& v) const {
  Fq2 r = fq2_mul(Fq2{u.a, u.b}, Fq2{v.a, v.b}, params_.q_field);
  return {r.a, r.b};
}

PairingValue CurveGroup::gt_pow(const PairingValue& u, const mpz_class& e) const {
  if (e < 0) throw Error("negative exponent");
  Fq2 r = fq2_pow(Fq2{u.a, u.b}, e, params_.q_field);
  return {r.a, r.b};
}

void CurveGroup::serialize(const GroupElement& p, ByteWriter& w) const {
  size_t width = params_.fe_width();
  w.u8(p.infinity ? 1 : 0);
  write_fe(w, p.infinity ? mpz_class(0) : p.x, width);
  write_fe(w, p.infinity ? mpz_class(0) : p.y, width);
}

GroupElement CurveGroup::parse_element(ByteReader& r) const {
  size_t width = params_.fe_width();
  uint8_t flag = r.u8();
  if (flag > 1) throw ParseError("bad identity flag");
  mpz_class x = read_fe(r, width, params_.q_field);
  mpz_class y = read_fe(r, width, params_.q_field);
  if (flag == 1) {
    if (x != 0 || y != 0) throw ParseError("nonzero identity coordinates");
    return identity();
  }
  GroupElement p{x, y, false};
  if (!is_on_curve(p)) throw ParseError("point not on curve");
  return p;
}

Bytes CurveGroup::element_bytes(const GroupElement& p) const {
  ByteWriter w;
  serialize(p, w);
  return w.take();
}

void CurveGroup::serialize(const PairingValue& v, ByteWriter& w) const {
  size_t width = params_.fe_width();
  write_fe(w, v.a, width);
  write_fe(w, v.b, width);
}

PairingValue CurveGroup::parse_pairing_value(ByteReader& r) const {
  size_t width = params_.fe_width();
  PairingValue v;
  v.a = read_fe(r, width, params_.q_field);
  v.b = read_fe(r, width, params_.q_field);
  return v;
}

}  // namespace p3
