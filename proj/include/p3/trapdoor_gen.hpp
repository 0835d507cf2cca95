#pragma once

#include "p3/master_key.hpp"
#include "p3/trapdoor.hpp"

namespace p3 {

// Owner-side trapdoor generation: one fresh keyword id per query position,
// the adjacency ciphertext C = E(beta) and a fresh dispersal factor. Every
// component is randomized, so two trapdoors for the same phrase never share
// bytes. beta is the search distance; the protocol fixes it to 1 (exact
// adjacency) and it is deliberately not surfaced in the CLI.
Trapdoor gen_trapdoor(const MasterKey& mk, const BgnEncryptor& enc,
                      const PhraseQuery& query, Rng& rng, bool conjunctive_only = false,
                      uint64_t beta = 1);

}  // namespace p3
