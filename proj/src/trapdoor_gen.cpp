#include "p3/trapdoor_gen.hpp"

#include "p3/error.hpp"

namespace p3 {

Trapdoor gen_trapdoor(const MasterKey& mk, const BgnEncryptor& enc,
                      const PhraseQuery& query, Rng& rng, bool conjunctive_only,
                      uint64_t beta) {
  if (query.keywords.empty()) throw Error("empty query");
  Trapdoor t;
  t.conjunctive_only = conjunctive_only;
  t.keyword_ids.reserve(query.keywords.size());
  for (const auto& w : query.keywords)
    t.keyword_ids.push_back(enc_keyword_for_trapdoor(mk.knn, w, rng));
  t.adjacency_ct = enc.encrypt(beta, rng);
  t.dispersal = make_dispersal_factor(enc.group(), mk.bgn.sk, rng);
  return t;
}

}  // namespace p3
