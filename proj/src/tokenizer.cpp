#include "p3/tokenizer.hpp"

namespace p3 {

namespace {

inline bool is_word_byte(uint8_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

inline char lower(uint8_t c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::string cur;
  uint32_t pos = 0;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back({cur, ++pos});
      cur.clear();
    }
  };
  for (char ch : text) {
    uint8_t c = static_cast<uint8_t>(ch);
    if (is_word_byte(c))
      cur.push_back(lower(c));
    else
      flush();
  }
  flush();
  return out;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
  return out;
}

}  // namespace p3
