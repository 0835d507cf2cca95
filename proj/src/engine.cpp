#include "p3/engine.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>

#include "p3/bgn.hpp"
#include "p3/error.hpp"

namespace p3 {

namespace {

uint64_t id_key(const std::array<uint8_t, 8>& id) {
  uint64_t k;
  std::memcpy(&k, id.data(), 8);
  return k;
}

}  // namespace

QueryEngine::QueryEngine(const CurveGroup& group, const SecureIndex& index)
    : group_(group), index_(index) {}

std::vector<std::vector<const SecureInvertedList*>> QueryEngine::locate_lists(
    const Trapdoor& t, QueryStats& stats) const {
  std::vector<std::vector<const SecureInvertedList*>> located(t.keyword_ids.size());
  for (size_t j = 0; j < t.keyword_ids.size(); ++j) {
    if (t.keyword_ids[j].part_a.size() != index_.d)
      throw Error("trapdoor dimension does not match index");
    for (const auto& list : index_.lists) {
      ++stats.lists_scanned;
      if (knn_match(t.keyword_ids[j], list.keyword_id)) located[j].push_back(&list);
    }
  }
  return located;
}

std::vector<CandidateDoc> QueryEngine::intersect_candidates(
    const std::vector<std::vector<const SecureInvertedList*>>& located) const {
  std::vector<CandidateDoc> candidates;
  if (located.empty()) return candidates;

  // Entries of one keyword's fragments partition its documents, so a doc id
  // appears at most once per position map.
  std::unordered_map<uint64_t, std::vector<const SecureEntry*>> chains;
  for (const auto* list : located[0])
    for (const auto& entry : list->entries)
      chains.emplace(id_key(entry.enc_doc_id), std::vector<const SecureEntry*>{&entry});

  for (size_t j = 1; j < located.size(); ++j) {
    std::unordered_map<uint64_t, const SecureEntry*> here;
    for (const auto* list : located[j])
      for (const auto& entry : list->entries) here.emplace(id_key(entry.enc_doc_id), &entry);
    for (auto it = chains.begin(); it != chains.end();) {
      auto hit = here.find(it->first);
      if (hit == here.end()) {
        it = chains.erase(it);
      } else {
        it->second.push_back(hit->second);
        ++it;
      }
    }
    if (chains.empty()) break;
  }

  candidates.reserve(chains.size());
  for (auto& [key, entries] : chains) {
    CandidateDoc cand;
    cand.enc_doc_id = entries.front()->enc_doc_id;
    cand.per_keyword_locations.reserve(entries.size());
    for (const auto* e : entries)
      cand.per_keyword_locations.emplace_back(e->enc_locations);
    candidates.push_back(std::move(cand));
  }
  // Deterministic processing order.
  std::sort(candidates.begin(), candidates.end(),
            [](const CandidateDoc& a, const CandidateDoc& b) {
              return a.enc_doc_id < b.enc_doc_id;
            });
  return candidates;
}

bool QueryEngine::adjacent(const GroupElement& c_a, const GroupElement& c_b,
                           const Trapdoor& t, QueryStats& stats) const {
  // E(x) = c_a · c_b^{-1} · C encrypts a - b + beta; zero means b = a + beta.
  GroupElement ex = group_.add(c_a, group_.add(group_.neg(c_b), t.adjacency_ct));
  ++stats.pairings_evaluated;
  return zero_test(group_, ex, t.dispersal);
}

bool QueryEngine::phrase_match(const CandidateDoc& candidate, const Trapdoor& t,
                               QueryStats& stats) const {
  if (candidate.per_keyword_locations.size() != t.keyword_ids.size())
    throw Error("candidate is missing location lists");
  if (t.keyword_ids.size() == 1) return true;

  std::vector<const GroupElement*> frontier;
  for (const auto& loc : candidate.per_keyword_locations[0]) frontier.push_back(&loc);

  for (size_t j = 1; j < candidate.per_keyword_locations.size(); ++j) {
    std::vector<const GroupElement*> next;
    for (const auto& c_b : candidate.per_keyword_locations[j]) {
      // c_b^{-1}·C is shared across the whole frontier for this location.
      GroupElement right = group_.add(group_.neg(c_b), t.adjacency_ct);
      for (const auto* c_a : frontier) {
        GroupElement ex = group_.add(*c_a, right);
        ++stats.pairings_evaluated;
        if (zero_test(group_, ex, t.dispersal)) {
          next.push_back(&c_b);
          break;
        }
      }
    }
    if (next.empty()) return false;
    frontier = std::move(next);
  }
  return true;
}

QueryResult QueryEngine::execute(const Trapdoor& t) const {
  if (t.keyword_ids.empty()) throw Error("empty trapdoor");
  QueryResult result;
  auto located = locate_lists(t, result.stats);
  auto candidates = intersect_candidates(located);
  result.stats.candidates_tested = candidates.size();

  for (const auto& cand : candidates) {
    if (t.conjunctive_only || phrase_match(cand, t, result.stats))
      result.matches.push_back(cand.enc_doc_id);
  }
  std::sort(result.matches.begin(), result.matches.end());
  result.matches.erase(std::unique(result.matches.begin(), result.matches.end()),
                       result.matches.end());
  return result;
}

}  // namespace p3
