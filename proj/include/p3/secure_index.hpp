#pragma once

#include <array>

#include "p3/group.hpp"
#include "p3/knn.hpp"

namespace p3 {

// One slot of a secure inverted list: the PRP-encrypted document identifier
// and BGN ciphertexts of the keyword's positions in that document. Padding
// slots are format-identical; nothing in the layout marks them.
struct SecureEntry {
  std::array<uint8_t, 8> enc_doc_id{};
  std::vector<GroupElement> enc_locations;
};

// Every list in an index has exactly eta entries, so list length reveals
// nothing about keyword frequency.
struct SecureInvertedList {
  IndexKeywordId keyword_id;
  std::vector<SecureEntry> entries;
};

struct SecureIndex {
  std::array<uint8_t, 32> params_digest{};
  uint16_t d = 0;
  uint32_t eta = 0;
  std::vector<SecureInvertedList> lists;

  Bytes serialize(const CurveGroup& group) const;
  static SecureIndex parse(std::span<const uint8_t> buf, const CurveGroup& group);
};

// Serialized size of one entry with the given location count; identical for
// real and padding entries by construction.
size_t secure_entry_wire_size(const CurveGroup& group, size_t location_count);

}  // namespace p3
