#pragma once

#include <set>

#include "p3/tokenizer.hpp"

namespace p3 {

// Ground truth for every accuracy figure: brute-force sliding-window scan of
// the plaintext corpus. Kept deliberately independent of the index and the
// query engine.
std::set<int64_t> oracle_phrase_search(const Corpus& corpus,
                                       const std::vector<std::string>& phrase);

// Documents containing every phrase keyword anywhere (the low-precision
// baseline semantics).
std::set<int64_t> oracle_conjunctive_search(const Corpus& corpus,
                                            const std::vector<std::string>& phrase);

}  // namespace p3
