#pragma once

#include "p3/bgn.hpp"

namespace p3 {

// Owner-held decryption key. dlog_base is g^p, precomputed because every
// decryption solves a discrete log on that base.
struct BgnSecretKey {
  mpz_class p;
  mpz_class q;
  GroupElement dlog_base;

  void serialize(ByteWriter& w, const CurveGroup& group) const;
  static BgnSecretKey parse(ByteReader& r, const CurveGroup& group);
};

struct BgnKeyPair {
  BgnPublicKey pk;
  BgnSecretKey sk;
};

struct BgnKeygenOptions {
  uint64_t msg_bound_cap = uint64_t{1} << 20;  // dlog stays ~2·√bound group ops
  unsigned cofactor_search_limit = 100000;     // multiples of 4 tried per prime pair
  unsigned prime_retry_limit = 32;             // fresh prime pairs before giving up
};

// Samples two tau-bit primes and derives the full parameter set: a field
// prime q_field = cofactor·n − 1 (always ≡ 3 mod 4 since 4 | cofactor), the
// order-n generator g, and h = u^q of order p. tau ≥ 16; desk-scale tau gives
// no real security, see README.
BgnKeyPair bgn_keygen(unsigned tau, Rng& rng, const BgnKeygenOptions& opts = {});

// Baby-step/giant-step over [0, max_m] on dlog_base. Throws if c does not
// decrypt within the bound.
uint64_t bgn_decrypt(const CurveGroup& group, const BgnSecretKey& sk,
                     const GroupElement& c, uint64_t max_m);

// psi = lambda^p for fresh random lambda, resampled until psi is not the
// identity. Lets the server run zero_test without learning p.
GroupElement make_dispersal_factor(const CurveGroup& group, const BgnSecretKey& sk,
                                   Rng& rng);

// Random tau-bit probable prime (top bit set).
mpz_class random_prime(unsigned bits, Rng& rng);

}  // namespace p3
