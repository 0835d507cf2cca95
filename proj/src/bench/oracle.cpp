#include "p3/bench/oracle.hpp"

#include <algorithm>

namespace p3 {

std::set<int64_t> oracle_phrase_search(const Corpus& corpus,
                                       const std::vector<std::string>& phrase) {
  std::set<int64_t> out;
  if (phrase.empty()) return out;
  for (const auto& [doc_id, text] : corpus) {
    auto words = tokenize_words(text);
    if (words.size() < phrase.size()) continue;
    for (size_t i = 0; i + phrase.size() <= words.size(); ++i) {
      if (std::equal(phrase.begin(), phrase.end(), words.begin() + i)) {
        out.insert(doc_id);
        break;
      }
    }
  }
  return out;
}

std::set<int64_t> oracle_conjunctive_search(const Corpus& corpus,
                                            const std::vector<std::string>& phrase) {
  std::set<int64_t> out;
  if (phrase.empty()) return out;
  for (const auto& [doc_id, text] : corpus) {
    auto words = tokenize_words(text);
    bool all = true;
    for (const auto& w : phrase) {
      if (std::find(words.begin(), words.end(), w) == words.end()) {
        all = false;
        break;
      }
    }
    if (all) out.insert(doc_id);
  }
  return out;
}

}  // namespace p3
