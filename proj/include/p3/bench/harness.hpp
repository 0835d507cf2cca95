#pragma once

#include <iosfwd>
#include <optional>

#include "p3/bench/corpus.hpp"
#include "p3/bench/oracle.hpp"
#include "p3/engine.hpp"
#include "p3/owner_service.hpp"

namespace p3 {

// In-process owner + server pair over one corpus: keygen, index build,
// direct query execution. The socket-free path used by tests and the bench
// harness.
class Pipeline {
 public:
  struct Options {
    unsigned tau = 32;
    uint16_t d = 8;
    std::optional<uint32_t> eta_override;  // nullopt = frequency median
    uint64_t seed = 1;
  };

  Pipeline(const Corpus& corpus, const Options& opts);

  const OwnerContext& owner() const { return owner_; }
  const SecureIndex& index() const { return index_; }
  const CurveGroup& group() const { return owner_.group(); }
  uint32_t eta() const { return eta_; }
  double index_build_ms() const { return index_build_ms_; }
  Rng& rng() { return rng_; }

  Trapdoor make_trapdoor(const std::vector<std::string>& phrase, bool conjunctive);
  // Runs the query engine and owner-decrypts the matched ids.
  std::set<int64_t> search(const std::vector<std::string>& phrase, bool conjunctive,
                           QueryStats* stats = nullptr);
  std::set<int64_t> run_trapdoor(const Trapdoor& t, QueryStats* stats = nullptr);

 private:
  Rng rng_;
  OwnerContext owner_;
  SecureIndex index_;
  uint32_t eta_ = 0;
  double index_build_ms_ = 0;
};

struct BenchConfig {
  Corpus corpus;
  std::vector<uint32_t> query_lengths = {2, 3, 4, 5};
  uint32_t phrases_per_length = 50;
  std::optional<uint32_t> eta_override;
  uint32_t repetitions = 20;
  unsigned tau = 32;
  uint16_t d = 8;
  uint64_t seed = 1;
  // When set, used instead of window sampling (all lengths must be present).
  std::vector<std::vector<std::string>> explicit_queries;
};

struct QueryRecord {
  std::vector<std::string> phrase;
  uint32_t qlen = 0;
  std::string mode;  // "phrase" or "conjunctive"
  uint64_t tp = 0, fp = 0;
  std::optional<double> precision;  // null when tp + fp == 0
  bool exact = false;               // result set equals the oracle set
  double mean_ms = 0, p95_ms = 0;
  uint64_t pairings = 0;
  size_t trapdoor_bytes = 0;
  size_t result_count = 0;
};

struct PrecisionReport {
  uint32_t eta = 0;
  std::vector<QueryRecord> records;
  struct Aggregate {
    uint32_t qlen;
    std::string mode;
    uint64_t tp = 0, fp = 0;
    std::optional<double> precision;
    double mean_ms = 0;
    bool all_exact = true;
  };
  std::vector<Aggregate> aggregates;
  bool oracle_mismatch = false;  // any phrase-mode record not exact
};

// Runs every query in both modes against the oracle. Oracle disagreement in
// phrase mode is reported, never averaged away.
PrecisionReport run_precision_bench(const BenchConfig& cfg);

struct TimingRow {
  uint32_t corpus_docs = 0;
  uint32_t qlen = 0;
  std::string mode;
  double index_build_ms = 0;
  double trapdoor_ms = 0;
  double query_mean_ms = 0, query_p95_ms = 0;
  uint64_t pairings = 0;
  size_t trapdoor_bytes = 0;
};

struct TimingReport {
  std::vector<TimingRow> rows;
};

// Re-runs the pipeline over prefixes of the corpus with the given sizes and
// measures trapdoor generation, query latency and wire volumes.
TimingReport run_timing_bench(const BenchConfig& cfg, const std::vector<uint32_t>& sizes);

void write_precision_csv(const PrecisionReport& report, std::ostream& os);
void write_precision_jsonl(const PrecisionReport& report, std::ostream& os);
void print_precision_summary(const PrecisionReport& report, std::ostream& os);
void write_timing_csv(const TimingReport& report, std::ostream& os);
void print_timing_summary(const TimingReport& report, std::ostream& os);

}  // namespace p3
