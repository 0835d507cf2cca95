#include "p3/bench/harness.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <map>
#include <ostream>

#include <json.hpp>

#include "p3/error.hpp"

namespace p3 {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double percentile(std::vector<double> v, double pct) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  size_t idx = static_cast<size_t>(pct * (v.size() - 1) + 0.5);
  return v[idx];
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

Pipeline::Pipeline(const Corpus& corpus, const Options& opts)
    : rng_(opts.seed),
      owner_([&] {
        Rng keygen_rng(opts.seed ^ 0x9e3779b97f4a7c15ull);
        return OwnerContext(master_keygen(opts.tau, opts.d, keygen_rng));
      }()) {
  auto start = Clock::now();
  auto build = build_secure_index(owner_.mk(), owner_.encryptor(), corpus,
                                  opts.eta_override, rng_);
  index_build_ms_ = ms_since(start);
  index_ = std::move(build.index);
  eta_ = build.eta;
}

Trapdoor Pipeline::make_trapdoor(const std::vector<std::string>& phrase,
                                 bool conjunctive) {
  return gen_trapdoor(owner_.mk(), owner_.encryptor(), PhraseQuery{phrase}, rng_,
                      conjunctive);
}

std::set<int64_t> Pipeline::run_trapdoor(const Trapdoor& t, QueryStats* stats) {
  QueryEngine engine(group(), index_);
  QueryResult result = engine.execute(t);
  if (stats) *stats = result.stats;
  std::set<int64_t> ids;
  for (const auto& enc_id : result.matches) {
    int64_t id = decrypt_doc_id(owner_.mk(), enc_id);
    if (id > 0) ids.insert(id);  // reserved pad sub-domain is dropped
  }
  return ids;
}

std::set<int64_t> Pipeline::search(const std::vector<std::string>& phrase,
                                   bool conjunctive, QueryStats* stats) {
  Trapdoor t = make_trapdoor(phrase, conjunctive);
  return run_trapdoor(t, stats);
}

namespace {

std::vector<std::vector<std::string>> queries_for_length(const BenchConfig& cfg,
                                                         uint32_t qlen, Rng& rng) {
  if (!cfg.explicit_queries.empty()) {
    std::vector<std::vector<std::string>> out;
    for (const auto& q : cfg.explicit_queries)
      if (q.size() == qlen) out.push_back(q);
    if (out.empty()) throw Error("no explicit queries of length " + std::to_string(qlen));
    return out;
  }
  return sample_query_phrases(cfg.corpus, qlen, cfg.phrases_per_length, rng);
}

QueryRecord score_one(Pipeline& pipe, const Corpus& corpus,
                      const std::vector<std::string>& phrase, bool conjunctive,
                      uint32_t repetitions) {
  QueryRecord rec;
  rec.phrase = phrase;
  rec.qlen = static_cast<uint32_t>(phrase.size());
  rec.mode = conjunctive ? "conjunctive" : "phrase";

  Trapdoor t = pipe.make_trapdoor(phrase, conjunctive);
  rec.trapdoor_bytes = t.serialize(pipe.group()).size();

  std::vector<double> times;
  times.reserve(repetitions);
  std::set<int64_t> ids;
  QueryStats stats;
  for (uint32_t r = 0; r < repetitions; ++r) {
    auto start = Clock::now();
    std::set<int64_t> got = pipe.run_trapdoor(t, &stats);
    times.push_back(ms_since(start));
    if (r == 0)
      ids = std::move(got);
    else if (got != ids)
      throw Error("nondeterministic result set across repetitions");
  }
  rec.mean_ms = mean(times);
  rec.p95_ms = percentile(times, 0.95);
  rec.pairings = stats.pairings_evaluated;
  rec.result_count = ids.size();

  std::set<int64_t> truth = oracle_phrase_search(corpus, phrase);
  for (int64_t id : ids)
    truth.count(id) ? ++rec.tp : ++rec.fp;
  if (rec.tp + rec.fp > 0)
    rec.precision = static_cast<double>(rec.tp) / static_cast<double>(rec.tp + rec.fp);
  rec.exact = ids == truth;
  return rec;
}

}  // namespace

PrecisionReport run_precision_bench(const BenchConfig& cfg) {
  Pipeline pipe(cfg.corpus, {cfg.tau, cfg.d, cfg.eta_override, cfg.seed});
  Rng query_rng(cfg.seed ^ 0xc2b2ae3d27d4eb4full);

  PrecisionReport report;
  report.eta = pipe.eta();

  std::map<std::pair<uint32_t, std::string>, PrecisionReport::Aggregate> agg;
  for (uint32_t qlen : cfg.query_lengths) {
    auto queries = queries_for_length(cfg, qlen, query_rng);
    for (const auto& phrase : queries) {
      for (bool conjunctive : {false, true}) {
        QueryRecord rec = score_one(pipe, cfg.corpus, phrase, conjunctive,
                                    cfg.repetitions);
        auto key = std::make_pair(qlen, rec.mode);
        auto& a = agg.try_emplace(key, PrecisionReport::Aggregate{qlen, rec.mode})
                      .first->second;
        a.tp += rec.tp;
        a.fp += rec.fp;
        a.mean_ms += rec.mean_ms;
        if (rec.mode == "phrase" && !rec.exact) {
          report.oracle_mismatch = true;
          a.all_exact = false;
        }
        report.records.push_back(std::move(rec));
      }
    }
  }
  for (auto& [key, a] : agg) {
    size_t n = 0;
    for (const auto& r : report.records)
      if (r.qlen == key.first && r.mode == key.second) ++n;
    if (n > 0) a.mean_ms /= static_cast<double>(n);
    if (a.tp + a.fp > 0)
      a.precision = static_cast<double>(a.tp) / static_cast<double>(a.tp + a.fp);
    report.aggregates.push_back(a);
  }
  return report;
}

TimingReport run_timing_bench(const BenchConfig& cfg, const std::vector<uint32_t>& sizes) {
  TimingReport report;
  for (uint32_t size : sizes) {
    if (size > cfg.corpus.size())
      throw Error("corpus has fewer documents than requested size");
    Corpus subset(cfg.corpus.begin(), cfg.corpus.begin() + size);
    Pipeline pipe(subset, {cfg.tau, cfg.d, cfg.eta_override, cfg.seed});
    Rng query_rng(cfg.seed ^ (0x100000001b3ull * size));

    for (uint32_t qlen : cfg.query_lengths) {
      auto queries = queries_for_length(cfg, qlen, query_rng);
      for (bool conjunctive : {false, true}) {
        TimingRow row;
        row.corpus_docs = size;
        row.qlen = qlen;
        row.mode = conjunctive ? "conjunctive" : "phrase";
        row.index_build_ms = pipe.index_build_ms();

        std::vector<double> trapdoor_times, query_times;
        uint64_t pairings = 0;
        size_t trapdoor_bytes = 0;
        for (const auto& phrase : queries) {
          auto t0 = Clock::now();
          Trapdoor t = pipe.make_trapdoor(phrase, conjunctive);
          trapdoor_times.push_back(ms_since(t0));
          trapdoor_bytes = std::max(trapdoor_bytes, t.serialize(pipe.group()).size());
          QueryStats stats;
          for (uint32_t r = 0; r < cfg.repetitions; ++r) {
            auto q0 = Clock::now();
            pipe.run_trapdoor(t, &stats);
            query_times.push_back(ms_since(q0));
          }
          pairings += stats.pairings_evaluated;
        }
        row.trapdoor_ms = mean(trapdoor_times);
        row.query_mean_ms = mean(query_times);
        row.query_p95_ms = percentile(query_times, 0.95);
        row.pairings = queries.empty() ? 0 : pairings / queries.size();
        row.trapdoor_bytes = trapdoor_bytes;
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

void write_precision_csv(const PrecisionReport& report, std::ostream& os) {
  os << "qlen,mode,precision,mean_ms,p95_ms,bytes\n";
  for (const auto& r : report.records) {
    os << r.qlen << ',' << r.mode << ',';
    if (r.precision)
      os << *r.precision;
    else
      os << "null";
    os << ',' << r.mean_ms << ',' << r.p95_ms << ',' << r.trapdoor_bytes << '\n';
  }
}

void write_precision_jsonl(const PrecisionReport& report, std::ostream& os) {
  for (const auto& r : report.records) {
    nlohmann::json j{{"phrase", r.phrase},
                     {"qlen", r.qlen},
                     {"mode", r.mode},
                     {"tp", r.tp},
                     {"fp", r.fp},
                     {"exact", r.exact},
                     {"mean_ms", r.mean_ms},
                     {"p95_ms", r.p95_ms},
                     {"pairings", r.pairings},
                     {"trapdoor_bytes", r.trapdoor_bytes},
                     {"results", r.result_count}};
    if (r.precision)
      j["precision"] = *r.precision;
    else
      j["precision"] = nullptr;
    os << j.dump() << '\n';
  }
}

void print_precision_summary(const PrecisionReport& report, std::ostream& os) {
  os << "eta = " << report.eta << "\n";
  os << std::left << std::setw(6) << "|Q|" << std::setw(14) << "mode" << std::setw(12)
     << "precision" << std::setw(10) << "tp" << std::setw(10) << "fp" << std::setw(12)
     << "mean_ms" << "\n";
  for (const auto& a : report.aggregates) {
    os << std::left << std::setw(6) << a.qlen << std::setw(14) << a.mode << std::setw(12);
    if (a.precision)
      os << *a.precision;
    else
      os << "n/a";
    os << std::setw(10) << a.tp << std::setw(10) << a.fp << std::setw(12) << a.mean_ms
       << "\n";
  }
  if (report.oracle_mismatch)
    os << "WARNING: phrase-mode results disagreed with the plaintext oracle\n";
}

void write_timing_csv(const TimingReport& report, std::ostream& os) {
  os << "docs,qlen,mode,index_build_ms,trapdoor_ms,query_mean_ms,query_p95_ms,"
        "pairings,trapdoor_bytes\n";
  for (const auto& r : report.rows) {
    os << r.corpus_docs << ',' << r.qlen << ',' << r.mode << ',' << r.index_build_ms
       << ',' << r.trapdoor_ms << ',' << r.query_mean_ms << ',' << r.query_p95_ms << ','
       << r.pairings << ',' << r.trapdoor_bytes << '\n';
  }
}

void print_timing_summary(const TimingReport& report, std::ostream& os) {
  os << std::left << std::setw(8) << "docs" << std::setw(6) << "|Q|" << std::setw(14)
     << "mode" << std::setw(16) << "build_ms" << std::setw(14) << "trapdoor_ms"
     << std::setw(14) << "query_ms" << std::setw(12) << "pairings" << "\n";
  for (const auto& r : report.rows) {
    os << std::left << std::setw(8) << r.corpus_docs << std::setw(6) << r.qlen
       << std::setw(14) << r.mode << std::setw(16) << r.index_build_ms << std::setw(14)
       << r.trapdoor_ms << std::setw(14) << r.query_mean_ms << std::setw(12) << r.pairings
       << "\n";
  }
}

}  // namespace p3
