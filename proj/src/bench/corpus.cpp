#include "p3/bench/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "p3/error.hpp"

namespace p3 {

namespace {

// Filler vocabulary for synthetic documents.
const char* kWordBank[] = {
    "the",      "protocol",  "server",   "client",   "message",  "packet",
    "network",  "transfer",  "control",  "data",     "stream",   "buffer",
    "session",  "request",   "response", "header",   "field",    "value",
    "option",   "timeout",   "error",    "detection", "checksum", "segment",
    "window",   "sequence",  "number",   "address",  "routing",  "table",
    "gateway",  "interface", "host",     "domain",   "name",     "record",
    "query",    "answer",    "cache",    "entry",    "memory",   "shared",
    "process",  "thread",    "signal",   "event",    "handler",  "state",
    "machine",  "transition", "input",   "output",   "file",     "system",
    "block",    "device",    "driver",   "kernel",   "user",     "space",
    "interrupt", "character", "terminal", "sophisticated", "line", "mode",
    "byte",     "order",     "format",   "version",  "length",   "type",
    "code",     "status",    "result",   "service",  "quality",  "level",
    "priority", "queue",     "schedule", "policy",   "security", "access",
    "token",    "key",       "exchange", "cipher",   "digest",   "random",
    "counter",  "clock",     "timestamp", "interval", "period",  "rate",
};
constexpr size_t kWordBankSize = sizeof(kWordBank) / sizeof(kWordBank[0]);

std::string filler_word(uint64_t i) {
  if (i < kWordBankSize) return kWordBank[i];
  return std::string(kWordBank[i % kWordBankSize]) + std::to_string(i / kWordBankSize);
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace

LoadedCorpus load_corpus_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("corpus directory is empty: " + dir.string());

  LoadedCorpus out;
  int64_t id = 1;
  for (const auto& path : files) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream body;
    body << f.rdbuf();
    out.corpus.emplace_back(id++, body.str());
    out.names.push_back(path.filename().string());
  }
  return out;
}

Corpus make_synthetic_corpus(const SyntheticConfig& cfg) {
  if (cfg.num_docs == 0 || cfg.tokens_per_doc < 8) throw Error("synthetic corpus too small");
  Rng rng(cfg.seed);

  std::vector<std::vector<std::string>> docs(cfg.num_docs);
  for (auto& doc : docs) {
    doc.reserve(cfg.tokens_per_doc);
    for (uint32_t t = 0; t < cfg.tokens_per_doc; ++t)
      doc.push_back(filler_word(rng.below(uint64_t{2} * kWordBankSize)));
  }

  // Plant phrases over filler tokens. Adjacent plants write the phrase as a
  // contiguous run; scattered plants interleave filler separators so the
  // words co-occur without forming the phrase.
  for (const auto& phrase : cfg.planted_phrases) {
    if (phrase.size() < 2) throw Error("planted phrases need at least two words");
    size_t adj_span = phrase.size();
    size_t scat_span = 2 * phrase.size() - 1;
    if (cfg.tokens_per_doc < scat_span + 2) throw Error("documents too short for plants");

    for (uint32_t k = 0; k < cfg.adjacent_docs_per_phrase; ++k) {
      auto& doc = docs[rng.below(docs.size())];
      size_t start = rng.below(doc.size() - adj_span + 1);
      for (size_t i = 0; i < phrase.size(); ++i) doc[start + i] = phrase[i];
    }
    for (uint32_t k = 0; k < cfg.scattered_docs_per_phrase; ++k) {
      auto& doc = docs[rng.below(docs.size())];
      size_t start = rng.below(doc.size() - scat_span + 1);
      for (size_t i = 0; i < phrase.size(); ++i) {
        doc[start + 2 * i] = phrase[i];
        if (i + 1 < phrase.size())
          doc[start + 2 * i + 1] = filler_word(rng.below(kWordBankSize));
      }
    }
  }

  Corpus corpus;
  corpus.reserve(cfg.num_docs);
  for (uint32_t i = 0; i < cfg.num_docs; ++i)
    corpus.emplace_back(static_cast<int64_t>(i) + 1, join(docs[i]));
  return corpus;
}

Corpus make_frequency_corpus(const std::vector<uint32_t>& freqs) {
  if (freqs.empty()) throw Error("no frequencies given");
  uint32_t num_docs = *std::max_element(freqs.begin(), freqs.end());
  if (num_docs == 0) throw Error("frequencies must be positive");
  std::vector<std::vector<std::string>> docs(num_docs);
  for (size_t k = 0; k < freqs.size(); ++k) {
    std::string word = "kw" + std::to_string(k);
    for (uint32_t d = 0; d < freqs[k]; ++d) docs[d].push_back(word);
  }
  Corpus corpus;
  for (uint32_t i = 0; i < num_docs; ++i)
    corpus.emplace_back(static_cast<int64_t>(i) + 1, join(docs[i]));
  return corpus;
}

Corpus make_miniature_corpus() {
  auto doc = [](int64_t id, size_t len, std::vector<std::pair<size_t, std::string>> plants) {
    std::vector<std::string> words(len);
    for (size_t i = 0; i < len; ++i)
      words[i] = "filler" + std::to_string(id) + "x" + std::to_string(i + 1);
    for (auto& [pos, w] : plants) words[pos - 1] = w;  // 1-based positions
    return join(words);
  };
  Corpus corpus;
  corpus.emplace_back(1, doc(1, 24, {{5, "heart"}, {12, "heart"}, {20, "heart"},
                                     {6, "attack"}, {18, "attack"}}));
  corpus.emplace_back(2, doc(2, 10, {{3, "attack"}}));
  corpus.emplace_back(4, doc(4, 12, {{7, "attack"}}));
  corpus.emplace_back(6, doc(6, 44, {{33, "heart"}, {41, "heart"}}));
  return corpus;
}

std::vector<std::vector<std::string>> sample_query_phrases(const Corpus& corpus,
                                                           uint32_t length,
                                                           uint32_t count, Rng& rng) {
  if (length == 0) throw Error("phrase length must be positive");
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(corpus.size());
  for (const auto& [id, text] : corpus) tokenized.push_back(tokenize_words(text));

  std::vector<std::vector<std::string>> out;
  size_t attempts = 0;
  const size_t max_attempts = 200 * static_cast<size_t>(count) + 1000;
  while (out.size() < count && attempts++ < max_attempts) {
    const auto& words = tokenized[rng.below(tokenized.size())];
    if (words.size() < length) continue;
    size_t start = rng.below(words.size() - length + 1);
    std::vector<std::string> phrase(words.begin() + start, words.begin() + start + length);
    std::set<std::string> uniq(phrase.begin(), phrase.end());
    if (uniq.size() != phrase.size()) continue;  // skip windows with repeats
    out.push_back(std::move(phrase));
  }
  if (out.size() < count)
    throw Error("could not sample enough distinct-token windows from the corpus");
  return out;
}

}  // namespace p3
