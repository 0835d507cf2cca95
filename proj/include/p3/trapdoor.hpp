#pragma once

#include <string>

#include "p3/group.hpp"
#include "p3/knn.hpp"

namespace p3 {

// A phrase query: keywords in phrase order, normalized by the same tokenizer
// rules as indexing.
struct PhraseQuery {
  std::vector<std::string> keywords;

  static PhraseQuery from_phrase(std::string_view phrase);
  bool operator==(const PhraseQuery&) const = default;
};

// The encrypted form of a query. keyword_ids are in phrase order (the server
// needs the order to chain adjacency tests); adjacency_ct is an encryption
// of the search distance (1 for exact phrases); dispersal is lambda^p.
struct Trapdoor {
  std::vector<TrapdoorKeywordId> keyword_ids;
  GroupElement adjacency_ct;
  GroupElement dispersal;
  bool conjunctive_only = false;

  Bytes serialize(const CurveGroup& group) const;
  static Trapdoor parse(std::span<const uint8_t> buf, const CurveGroup& group);
};

}  // namespace p3
