#pragma once

#include <set>

#include "p3/bench/corpus.hpp"
#include "p3/bench/harness.hpp"

namespace p3::test {

// One key pair / master key per tau, shared across test cases in a binary.
inline const BgnKeyPair& shared_keys(unsigned tau = 32) {
  static std::map<unsigned, BgnKeyPair> cache;
  auto it = cache.find(tau);
  if (it == cache.end()) {
    Rng rng(1000 + tau);
    it = cache.emplace(tau, bgn_keygen(tau, rng)).first;
  }
  return it->second;
}

inline const MasterKey& shared_master_key() {
  static MasterKey mk = [] {
    Rng rng(4242);
    return master_keygen(32, 8, rng);
  }();
  return mk;
}

inline std::set<int64_t> ids_of(const Corpus& corpus) {
  std::set<int64_t> out;
  for (const auto& [id, text] : corpus) out.insert(id);
  return out;
}

}  // namespace p3::test
