#pragma once

#include <filesystem>
#include <optional>

#include "p3/rng.hpp"
#include "p3/tokenizer.hpp"

namespace p3 {

struct LoadedCorpus {
  Corpus corpus;
  std::vector<std::string> names;  // names[i] belongs to doc id i+1
};

// Reads every regular file in the directory (sorted by name) as one
// document; ids are assigned 1..m.
LoadedCorpus load_corpus_dir(const std::filesystem::path& dir);

// Deterministic synthetic corpus. Filler text is drawn from a fixed word
// bank; planted phrases use a reserved vocabulary that never appears as
// filler, so a phrase occurs adjacently only where planted. Scattered
// plants contain all phrase words with separators between them, which is
// what gives the conjunctive baseline its false positives.
struct SyntheticConfig {
  uint32_t num_docs = 50;
  uint32_t tokens_per_doc = 120;
  uint64_t seed = 1;
  std::vector<std::vector<std::string>> planted_phrases;
  uint32_t adjacent_docs_per_phrase = 3;
  uint32_t scattered_docs_per_phrase = 3;
};
Corpus make_synthetic_corpus(const SyntheticConfig& cfg);

// Corpus whose per-keyword document frequencies are exactly the given
// multiset, for pinning the eta median.
Corpus make_frequency_corpus(const std::vector<uint32_t>& freqs);

// The two-file miniature: "heart" in documents 1 (positions 5, 12, 20) and 6
// (33, 41), "attack" in documents 1 (6, 18), 2 and 4. With eta = 2 the
// "attack" list splits into two fragments, the second padded.
Corpus make_miniature_corpus();

// Contiguous token windows of the given length sampled from random
// documents; windows with repeated tokens are skipped.
std::vector<std::vector<std::string>> sample_query_phrases(const Corpus& corpus,
                                                           uint32_t length,
                                                           uint32_t count, Rng& rng);

}  // namespace p3
