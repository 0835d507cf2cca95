// Operator CLI wrapping the three roles: data owner (keygen, build-index,
// publish, trapdoor, owner serve), cloud server (serve), and user (search),
// plus the evaluation harness (bench).

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "p3/bench/harness.hpp"
#include "p3/error.hpp"
#include "p3/service.hpp"

namespace {

using namespace p3;

std::pair<std::string, uint16_t> parse_endpoint(const std::string& s) {
  auto colon = s.rfind(':');
  if (colon == std::string::npos || colon + 1 >= s.size())
    throw Error("expected host:port, got '" + s + "'");
  int port = std::stoi(s.substr(colon + 1));
  if (port <= 0 || port > 65535) throw Error("bad port in '" + s + "'");
  return {s.substr(0, colon), static_cast<uint16_t>(port)};
}

Rng make_rng(const std::optional<uint64_t>& seed) {
  return seed ? Rng(*seed) : Rng();
}

std::optional<uint32_t> parse_eta(const std::string& s) {
  if (s == "median") return std::nullopt;
  long v = std::stol(s);
  if (v <= 0) throw Error("eta must be positive or 'median'");
  return static_cast<uint32_t>(v);
}

std::atomic<bool> g_stop{false};
void handle_sigint(int) { g_stop = true; }

void wait_for_sigint() {
  struct sigaction sa{};
  sa.sa_handler = handle_sigint;
  sigaction(SIGINT, &sa, nullptr);
  sigaction(SIGTERM, &sa, nullptr);
  while (!g_stop) {
    timespec ts{0, 200 * 1000 * 1000};
    nanosleep(&ts, nullptr);
  }
}

int cmd_keygen(unsigned tau, uint16_t d, const std::string& out_dir,
               std::optional<uint64_t> seed) {
  Rng rng = make_rng(seed);
  MasterKey mk = master_keygen(tau, d, rng);
  std::filesystem::create_directories(out_dir);
  auto dir = std::filesystem::path(out_dir);
  mk.save(dir / "master.p3mk");
  write_file(dir / "public.p3pp", mk.public_params().serialize());
  std::cout << "wrote " << (dir / "master.p3mk").string() << " and "
            << (dir / "public.p3pp").string() << "\n"
            << "tau=" << tau << " d=" << d
            << " n_bits=" << mpz_sizeinbase(mk.bgn.pk.params.n.get_mpz_t(), 2)
            << " field_bits=" << mpz_sizeinbase(mk.bgn.pk.params.q_field.get_mpz_t(), 2)
            << " msg_bound=" << mk.bgn.pk.msg_bound << "\n";
  return 0;
}

int cmd_build_index(const std::string& keys_dir, const std::string& corpus_dir,
                    const std::string& out_file, const std::string& eta_arg,
                    std::optional<uint64_t> seed) {
  MasterKey mk = MasterKey::load(std::filesystem::path(keys_dir) / "master.p3mk");
  LoadedCorpus loaded = load_corpus_dir(corpus_dir);
  Rng rng = make_rng(seed);
  BgnEncryptor enc(mk.bgn.pk);
  auto build = build_secure_index(mk, enc, loaded.corpus, parse_eta(eta_arg), rng);
  Bytes bytes = build.index.serialize(enc.group());
  write_file(out_file, bytes);

  nlohmann::json docmap;
  for (size_t i = 0; i < loaded.names.size(); ++i)
    docmap[std::to_string(i + 1)] = loaded.names[i];
  std::ofstream(out_file + ".docmap.json") << docmap.dump(2) << "\n";

  std::cout << "indexed " << loaded.corpus.size() << " documents: eta=" << build.eta
            << " lists=" << build.index.lists.size() << " bytes=" << bytes.size() << "\n";
  return 0;
}

int cmd_publish(const std::string& keys_dir, const std::string& corpus_dir,
                const std::string& index_file, const std::string& server,
                std::optional<uint64_t> seed) {
  MasterKey mk = MasterKey::load(std::filesystem::path(keys_dir) / "master.p3mk");
  Bytes index_bytes = read_file(index_file);
  LoadedCorpus loaded = load_corpus_dir(corpus_dir);
  Rng rng = make_rng(seed);

  auto [host, port] = parse_endpoint(server);
  auto expect_ack = [&](TcpStream& s, MsgKind kind) {
    auto in = s.recv_msg();
    if (in.status != TcpStream::Received::Status::kOk)
      throw Error("server closed connection");
    if (in.msg.kind == MsgKind::kError)
      throw Error("server error: " + decode_error(in.msg.payload).message);
    if (in.msg.kind != kind) throw Error("unexpected reply kind");
  };

  TcpStream s = tcp_connect(host, port);
  s.send_msg({MsgKind::kPublishIndex,
              encode_publish_payload(mk.public_params(), index_bytes)});
  expect_ack(s, MsgKind::kPublishIndex);
  auto docs = encrypt_corpus_docs(mk, loaded.corpus, rng);
  s.send_msg({MsgKind::kPutDocs, encode_put_docs_payload(docs)});
  expect_ack(s, MsgKind::kPutDocs);
  std::cout << "published index (" << index_bytes.size() << " bytes) and "
            << docs.size() << " encrypted documents\n";
  return 0;
}

int cmd_trapdoor(const std::string& keys_dir, const std::string& phrase, bool conjunctive,
                 const std::string& out_file, std::optional<uint64_t> seed) {
  MasterKey mk = MasterKey::load(std::filesystem::path(keys_dir) / "master.p3mk");
  Rng rng = make_rng(seed);
  OwnerContext ctx(std::move(mk));
  Bytes bytes = ctx.make_trapdoor_bytes(phrase, conjunctive, rng);
  write_file(out_file, bytes);
  std::cout << "wrote trapdoor (" << bytes.size() << " bytes) to " << out_file << "\n";
  return 0;
}

int cmd_serve(const std::string& role, uint16_t port, const std::string& keys_dir,
              std::optional<uint64_t> seed) {
  if (role == "cloud") {
    CloudServer server;
    uint16_t bound = server.start(port);
    std::cout << "cloud server listening on 127.0.0.1:" << bound << "\n" << std::flush;
    wait_for_sigint();
    server.stop();
  } else if (role == "owner") {
    if (keys_dir.empty()) throw Error("--keys is required for the owner role");
    MasterKey mk = MasterKey::load(std::filesystem::path(keys_dir) / "master.p3mk");
    auto service = seed ? std::make_unique<OwnerService>(std::move(mk), *seed)
                        : std::make_unique<OwnerService>(std::move(mk));
    uint16_t bound = service->start(port);
    std::cout << "owner service listening on 127.0.0.1:" << bound << "\n" << std::flush;
    wait_for_sigint();
    service->stop();
  } else {
    throw Error("role must be 'cloud' or 'owner'");
  }
  return 0;
}

int cmd_search(const std::string& owner, const std::string& server,
               const std::string& phrase, bool conjunctive, bool show_text) {
  auto [oh, op] = parse_endpoint(owner);
  auto [sh, sp] = parse_endpoint(server);
  UserClient client({oh, op}, {sh, sp});
  auto outcome = client.search(phrase, conjunctive);
  std::cout << outcome.hits.size() << " document(s) match\n";
  for (const auto& hit : outcome.hits) {
    std::cout << "  doc " << hit.doc_id;
    if (show_text) {
      std::string snippet = hit.text.substr(0, 72);
      for (auto& c : snippet)
        if (c == '\n') c = ' ';
      std::cout << ": " << snippet << (hit.text.size() > 72 ? "..." : "");
    }
    std::cout << "\n";
  }
  std::cout << "stats: lists_scanned=" << outcome.stats.lists_scanned
            << " pairings=" << outcome.stats.pairings_evaluated
            << " candidates=" << outcome.stats.candidates_tested
            << " bytes_to_server=" << outcome.bytes_to_server
            << " bytes_from_server=" << outcome.bytes_from_server << "\n";
  return 0;
}

struct BenchCli {
  std::string corpus_dir;
  uint32_t synthetic_docs = 0;
  uint32_t tokens_per_doc = 120;
  std::vector<uint32_t> lengths = {2, 3, 4, 5};
  uint32_t phrases = 50;
  uint32_t reps = 20;
  std::string eta = "median";
  unsigned tau = 32;
  uint16_t d = 8;
  uint64_t seed = 1;
  std::string out_dir;
  std::string mode = "both";
  std::vector<uint32_t> timing_sizes = {50, 100, 200};
};

Corpus bench_corpus(const BenchCli& cli) {
  if (!cli.corpus_dir.empty()) return load_corpus_dir(cli.corpus_dir).corpus;
  if (cli.synthetic_docs == 0)
    throw Error("either --corpus or --synthetic-docs is required");
  SyntheticConfig cfg;
  cfg.num_docs = cli.synthetic_docs;
  cfg.tokens_per_doc = cli.tokens_per_doc;
  cfg.seed = cli.seed;
  cfg.planted_phrases = {{"error", "detection"},
                         {"shared", "memory", "segment"},
                         {"interrupt", "character", "handler", "table"},
                         {"sequence", "number", "window", "control", "field"}};
  return make_synthetic_corpus(cfg);
}

int cmd_bench(const BenchCli& cli) {
  BenchConfig cfg;
  cfg.corpus = bench_corpus(cli);
  cfg.query_lengths = cli.lengths;
  cfg.phrases_per_length = cli.phrases;
  cfg.eta_override = parse_eta(cli.eta);
  cfg.repetitions = cli.reps;
  cfg.tau = cli.tau;
  cfg.d = cli.d;
  cfg.seed = cli.seed;

  std::filesystem::path out = cli.out_dir.empty() ? "." : cli.out_dir;
  std::filesystem::create_directories(out);

  bool mismatch = false;
  if (cli.mode == "precision" || cli.mode == "both") {
    PrecisionReport report = run_precision_bench(cfg);
    print_precision_summary(report, std::cout);
    std::ofstream csv(out / "precision.csv");
    write_precision_csv(report, csv);
    std::ofstream jsonl(out / "precision.jsonl");
    write_precision_jsonl(report, jsonl);
    std::cout << "wrote " << (out / "precision.csv").string() << " and .jsonl\n";
    mismatch = report.oracle_mismatch;
  }
  if (cli.mode == "timing" || cli.mode == "both") {
    std::vector<uint32_t> sizes;
    for (uint32_t s : cli.timing_sizes)
      if (s <= cfg.corpus.size()) sizes.push_back(s);
    if (sizes.empty()) sizes.push_back(static_cast<uint32_t>(cfg.corpus.size()));
    TimingReport report = run_timing_bench(cfg, sizes);
    print_timing_summary(report, std::cout);
    std::ofstream csv(out / "timing.csv");
    write_timing_csv(report, csv);
    std::cout << "wrote " << (out / "timing.csv").string() << "\n";
  }
  // Exit 2 signals an oracle/engine disagreement, an invariant violation
  // rather than a measurement.
  return mismatch ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"P3 encrypted phrase search over an inverted index"};
  app.require_subcommand(1);

  std::optional<uint64_t> seed;

  auto* keygen = app.add_subcommand("keygen", "generate owner master key + public params");
  unsigned tau = 32;
  uint16_t d = 8;
  std::string out_dir = "keys";
  keygen->add_option("--tau", tau, "prime bit length (>= 16; desk-scale only)");
  keygen->add_option("--d", d, "keyword vector dimension (>= 3)");
  keygen->add_option("--out", out_dir, "output directory");
  keygen->add_option("--seed", seed, "deterministic randomness seed");

  auto* build = app.add_subcommand("build-index", "build the secure index from a corpus");
  std::string keys_dir = "keys", corpus_dir, index_file = "index.p3ix", eta_arg = "median";
  build->add_option("--keys", keys_dir, "key directory from keygen");
  build->add_option("--corpus", corpus_dir, "directory of plaintext documents")->required();
  build->add_option("--out", index_file, "output index file");
  build->add_option("--eta", eta_arg, "entries per list: 'median' or a number");
  build->add_option("--seed", seed, "deterministic randomness seed");

  auto* publish = app.add_subcommand("publish", "send index + encrypted docs to the server");
  std::string server_ep = "127.0.0.1:7733";
  publish->add_option("--keys", keys_dir, "key directory");
  publish->add_option("--corpus", corpus_dir, "directory of plaintext documents")->required();
  publish->add_option("--index", index_file, "index file from build-index");
  publish->add_option("--server", server_ep, "cloud server host:port");
  publish->add_option("--seed", seed, "deterministic randomness seed");

  auto* trapdoor = app.add_subcommand("trapdoor", "generate a trapdoor file for a phrase");
  std::string phrase, trapdoor_out = "trapdoor.p3td";
  bool conjunctive = false;
  trapdoor->add_option("--keys", keys_dir, "key directory");
  trapdoor->add_option("--phrase", phrase, "query phrase")->required();
  trapdoor->add_flag("--conjunctive", conjunctive, "multi-keyword mode, no phrase check");
  trapdoor->add_option("--out", trapdoor_out, "output trapdoor file");
  trapdoor->add_option("--seed", seed, "deterministic randomness seed");

  auto* serve = app.add_subcommand("serve", "run the cloud server or the owner service");
  std::string role = "cloud";
  uint16_t port = 7733;
  serve->add_option("--role", role, "'cloud' or 'owner'");
  serve->add_option("--port", port, "listen port (0 = ephemeral)");
  serve->add_option("--keys", keys_dir, "key directory (owner role)");
  serve->add_option("--seed", seed, "deterministic randomness seed (owner role)");

  auto* search = app.add_subcommand("search", "run a phrase search as the user");
  std::string owner_ep = "127.0.0.1:7734";
  bool show_text = false;
  search->add_option("--owner", owner_ep, "owner service host:port");
  search->add_option("--server", server_ep, "cloud server host:port");
  search->add_option("--phrase", phrase, "query phrase")->required();
  search->add_flag("--conjunctive", conjunctive, "multi-keyword mode, no phrase check");
  search->add_flag("--text", show_text, "print decrypted document snippets");

  auto* bench = app.add_subcommand("bench", "accuracy and timing harness");
  BenchCli bench_cli;
  bench->add_option("--corpus", bench_cli.corpus_dir, "plaintext corpus directory");
  bench->add_option("--synthetic-docs", bench_cli.synthetic_docs,
                    "generate a synthetic corpus of this many documents");
  bench->add_option("--tokens-per-doc", bench_cli.tokens_per_doc, "synthetic doc length");
  bench->add_option("--lengths", bench_cli.lengths, "query lengths to sweep")
      ->delimiter(',');
  bench->add_option("--phrases", bench_cli.phrases, "queries per length");
  bench->add_option("--reps", bench_cli.reps, "repetitions per query");
  bench->add_option("--eta", bench_cli.eta, "'median' or a number");
  bench->add_option("--tau", bench_cli.tau, "prime bit length");
  bench->add_option("--d", bench_cli.d, "keyword vector dimension");
  bench->add_option("--seed", bench_cli.seed, "deterministic seed");
  bench->add_option("--out", bench_cli.out_dir, "report output directory");
  bench->add_option("--mode", bench_cli.mode, "precision | timing | both");
  bench->add_option("--timing-sizes", bench_cli.timing_sizes, "corpus sizes for timing")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) return cmd_keygen(tau, d, out_dir, seed);
    if (*build) return cmd_build_index(keys_dir, corpus_dir, index_file, eta_arg, seed);
    if (*publish) return cmd_publish(keys_dir, corpus_dir, index_file, server_ep, seed);
    if (*trapdoor) return cmd_trapdoor(keys_dir, phrase, conjunctive, trapdoor_out, seed);
    if (*serve) return cmd_serve(role, port, keys_dir, seed);
    if (*search) return cmd_search(owner_ep, server_ep, phrase, conjunctive, show_text);
    if (*bench) return cmd_bench(bench_cli);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
