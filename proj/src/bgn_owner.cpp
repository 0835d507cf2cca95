#include "p3/bgn_owner.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "p3/error.hpp"

namespace p3 {

namespace {

constexpr int kPrimalityReps = 30;

bool is_prime(const mpz_class& v) {
  return mpz_probab_prime_p(v.get_mpz_t(), kPrimalityReps) != 0;
}

// Generator of the order-n subgroup with order exactly n: reject candidates
// killed by either prime factor.
GroupElement sample_full_order(const CurveGroup& group, const mpz_class& p,
                               const mpz_class& q, Rng& rng) {
  for (;;) {
    GroupElement cand = group.sample(rng);
    if (group.mul(cand, p).infinity) continue;
    if (group.mul(cand, q).infinity) continue;
    return cand;
  }
}

}  // namespace

mpz_class random_prime(unsigned bits, Rng& rng) {
  if (bits < 2) throw Error("prime bit length too small");
  for (;;) {
    mpz_class v = rng.below(mpz_class(1) << bits);
    mpz_setbit(v.get_mpz_t(), bits - 1);
    mpz_setbit(v.get_mpz_t(), 0);
    if (is_prime(v)) return v;
  }
}

BgnKeyPair bgn_keygen(unsigned tau, Rng& rng, const BgnKeygenOptions& opts) {
  if (tau < 16) throw Error("tau below the supported floor of 16");

  for (unsigned attempt = 0; attempt < opts.prime_retry_limit; ++attempt) {
    mpz_class p = random_prime(tau, rng);
    mpz_class q;
    do {
      q = random_prime(tau, rng);
    } while (q == p);
    mpz_class n = p * q;

    // q_field = cofactor·n − 1 with 4 | cofactor, so q_field ≡ 3 (mod 4) and
    // n | q_field + 1 by construction.
    mpz_class q_field, cofactor;
    bool found = false;
    for (unsigned step = 1; step <= opts.cofactor_search_limit; ++step) {
      cofactor = 4 * mpz_class(step);
      q_field = cofactor * n - 1;
      if (is_prime(q_field)) {
        found = true;
        break;
      }
    }
    if (!found) continue;  // fresh primes

    GroupParams params{n, q_field, cofactor};
    CurveGroup group(params);

    GroupElement g = sample_full_order(group, p, q, rng);
    GroupElement u = sample_full_order(group, p, q, rng);
    GroupElement h = group.mul(u, q);  // order p

    uint64_t bound_cap = opts.msg_bound_cap;
    // Keep plaintexts far below p so dlog recovery and the zero test stay
    // unambiguous.
    if (tau < 24) bound_cap = std::min(bound_cap, uint64_t{1} << (tau - 4));

    BgnKeyPair keys;
    keys.pk = BgnPublicKey{params, g, h, bound_cap};
    keys.sk = BgnSecretKey{p, q, group.mul(g, p)};
    return keys;
  }
  throw Error("parameter search failed; retry with different randomness");
}

void BgnSecretKey::serialize(ByteWriter& w, const CurveGroup& group) const {
  size_t width = group.params().fe_width();
  write_fe(w, p, width);
  write_fe(w, q, width);
  group.serialize(dlog_base, w);
}

BgnSecretKey BgnSecretKey::parse(ByteReader& r, const CurveGroup& group) {
  size_t width = group.params().fe_width();
  BgnSecretKey sk;
  mpz_class unbounded = mpz_class(1) << static_cast<unsigned long>(8 * width);
  sk.p = read_fe(r, width, unbounded);
  sk.q = read_fe(r, width, unbounded);
  sk.dlog_base = group.parse_element(r);
  if (sk.p * sk.q != group.params().n) throw ParseError("secret primes do not match n");
  return sk;
}

uint64_t bgn_decrypt(const CurveGroup& group, const BgnSecretKey& sk,
                     const GroupElement& c, uint64_t max_m) {
  // c^p = (g^p)^m; h-part dies because h has order p.
  GroupElement target = group.mul(c, sk.p);
  if (target.infinity) return 0;

  uint64_t steps = static_cast<uint64_t>(std::sqrt(static_cast<double>(max_m))) + 1;
  std::unordered_map<std::string, uint64_t> baby;
  baby.reserve(steps);
  GroupElement e = sk.dlog_base;
  for (uint64_t j = 1; j <= steps; ++j) {
    Bytes b = group.element_bytes(e);
    baby.emplace(std::string(b.begin(), b.end()), j);
    if (j < steps) e = group.add(e, sk.dlog_base);
  }
  // e == dlog_base·steps here; walk target − i·steps·dlog_base.
  GroupElement giant_step = group.neg(e);
  GroupElement gamma = target;
  for (uint64_t i = 0; i * steps <= max_m; ++i) {
    Bytes b = group.element_bytes(gamma);
    auto it = baby.find(std::string(b.begin(), b.end()));
    if (it != baby.end()) {
      uint64_t m = i * steps + it->second;
      if (m <= max_m) return m;
    }
    gamma = group.add(gamma, giant_step);
  }
  throw Error("no discrete log within bound (corrupt ciphertext or wrong bound)");
}

GroupElement make_dispersal_factor(const CurveGroup& group, const BgnSecretKey& sk,
                                   Rng& rng) {
  for (;;) {
    GroupElement lambda = group.sample(rng);
    GroupElement psi = group.mul(lambda, sk.p);
    if (!psi.infinity) return psi;
  }
}

}  // namespace p3
