#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace p3 {

// A corpus is a set of (document id, document text) pairs; ids are unique
// positive integers assigned by the owner.
using Corpus = std::vector<std::pair<int64_t, std::string>>;

struct Token {
  std::string text;
  uint32_t position;  // 1-based ordinal within the document
};

// Deterministic rule shared by indexing, trapdoor generation and the
// plaintext oracle: ASCII-lowercase, split on runs of anything that is not
// a letter or digit (bytes >= 0x80 count as separators), drop empties.
std::vector<Token> tokenize(std::string_view text);

// Token texts only, in position order.
std::vector<std::string> tokenize_words(std::string_view text);

}  // namespace p3
