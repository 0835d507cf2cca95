#pragma once

#include <span>

#include "p3/secure_index.hpp"
#include "p3/trapdoor.hpp"

namespace p3 {

// Work counters returned with every query; the bench harness reads them.
struct QueryStats {
  uint64_t lists_scanned = 0;      // (list, query position) match checks
  uint64_t pairings_evaluated = 0;
  uint64_t candidates_tested = 0;

  QueryStats& operator+=(const QueryStats& o) {
    lists_scanned += o.lists_scanned;
    pairings_evaluated += o.pairings_evaluated;
    candidates_tested += o.candidates_tested;
    return *this;
  }
};

// A document that contains every queried keyword: its encrypted id plus, per
// query position, the encrypted locations of that keyword in the document
// (borrowed from the index).
struct CandidateDoc {
  std::array<uint8_t, 8> enc_doc_id{};
  std::vector<std::span<const GroupElement>> per_keyword_locations;
};

struct QueryResult {
  std::vector<std::array<uint8_t, 8>> matches;  // sorted, no duplicates
  QueryStats stats;
};

// Server-side search over one immutable index. Read-only and safe to share
// across threads. The whole pipeline runs on ciphertexts; the only message
// exchange is the trapdoor in and the result out.
class QueryEngine {
 public:
  QueryEngine(const CurveGroup& group, const SecureIndex& index);

  // locate -> intersect -> phrase filter (skipped in conjunctive mode).
  QueryResult execute(const Trapdoor& t) const;

  // Pipeline stages, public because they are contract surfaces of their own.
  std::vector<std::vector<const SecureInvertedList*>> locate_lists(
      const Trapdoor& t, QueryStats& stats) const;
  std::vector<CandidateDoc> intersect_candidates(
      const std::vector<std::vector<const SecureInvertedList*>>& located) const;
  // One pairing: does b's plaintext location equal a's plus the trapdoor's
  // search distance?
  bool adjacent(const GroupElement& c_a, const GroupElement& c_b, const Trapdoor& t,
                QueryStats& stats) const;
  // Left-to-right frontier filtering over the candidate's location lists.
  bool phrase_match(const CandidateDoc& candidate, const Trapdoor& t,
                    QueryStats& stats) const;

 private:
  const CurveGroup& group_;
  const SecureIndex& index_;
};

}  // namespace p3
