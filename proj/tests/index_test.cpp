#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "p3/error.hpp"
#include "p3/index_builder.hpp"
#include "test_util.hpp"

using namespace p3;

namespace {

// Independent word/position counter for the tokenizer oracle, written as a
// character-class state machine instead of the production split-on-runs rule.
std::vector<std::pair<std::string, uint32_t>> recount_tokens(const std::string& text) {
  std::vector<std::pair<std::string, uint32_t>> out;
  uint32_t pos = 0;
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isalnum(c) && c < 128) {
      std::string word;
      while (i < text.size()) {
        unsigned char d = static_cast<unsigned char>(text[i]);
        if (!(std::isalnum(d) && d < 128)) break;
        word.push_back(static_cast<char>(std::tolower(d)));
        ++i;
      }
      out.emplace_back(word, ++pos);
    } else {
      ++i;
    }
  }
  return out;
}

// keyword -> doc -> locations, straight from a rescan of the corpus.
std::map<std::string, std::map<int64_t, std::vector<uint32_t>>> rescan(const Corpus& corpus) {
  std::map<std::string, std::map<int64_t, std::vector<uint32_t>>> truth;
  for (const auto& [id, text] : corpus)
    for (const auto& tok : tokenize(text)) truth[tok.text][id].push_back(tok.position);
  return truth;
}

}  // namespace

TEST_CASE("tokenizer rules") {
  auto toks = tokenize("Heart attack, heart!");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].text == "heart");
  CHECK(toks[0].position == 1);
  CHECK(toks[1].text == "attack");
  CHECK(toks[1].position == 2);
  CHECK(toks[2].text == "heart");
  CHECK(toks[2].position == 3);

  CHECK(tokenize("").empty());
  CHECK(tokenize("  ,;--  ").empty());

  auto mixed = tokenize("TCP/IP v4.2 retransmits; see RFC 793.");
  std::vector<std::string> words;
  for (auto& t : mixed) words.push_back(t.text);
  CHECK(words == std::vector<std::string>{"tcp", "ip", "v4", "2", "retransmits", "see",
                                          "rfc", "793"});
}

TEST_CASE("tokenizer agrees with an independent recount") {
  std::string paragraph =
      "The Transmission Control Protocol provides reliable, ordered delivery of a "
      "stream of octets.  Error detection uses a 16-bit checksum; sequence numbers "
      "wrap modulo 2^32, and flow-control windows are advertised by the receiver.";
  auto toks = tokenize(paragraph);
  auto expected = recount_tokens(paragraph);
  REQUIRE(toks.size() == expected.size());
  for (size_t i = 0; i < toks.size(); ++i) {
    CHECK(toks[i].text == expected[i].first);
    CHECK(toks[i].position == expected[i].second);
  }
}

TEST_CASE("plain index reproduces the miniature layout") {
  Corpus corpus = make_miniature_corpus();
  auto index = build_plain_index(corpus);

  auto find = [&](const std::string& kw) -> const PlainInvertedList& {
    for (const auto& list : index)
      if (list.keyword == kw) return list;
    throw Error("keyword missing: " + kw);
  };

  const auto& heart = find("heart");
  REQUIRE(heart.entries.size() == 2);
  CHECK(heart.entries[0].doc_id == 1);
  CHECK(heart.entries[0].locations == std::vector<uint32_t>{5, 12, 20});
  CHECK(heart.entries[1].doc_id == 6);
  CHECK(heart.entries[1].locations == std::vector<uint32_t>{33, 41});

  const auto& attack = find("attack");
  REQUIRE(attack.entries.size() == 3);
  CHECK(attack.entries[0].doc_id == 1);
  CHECK(attack.entries[0].locations == std::vector<uint32_t>{6, 18});
}

TEST_CASE("plain index on a single-word corpus") {
  Corpus corpus{{1, "hello"}};
  auto index = build_plain_index(corpus);
  REQUIRE(index.size() == 1);
  CHECK(index[0].keyword == "hello");
  REQUIRE(index[0].entries.size() == 1);
  CHECK(index[0].entries[0].doc_id == 1);
  CHECK(index[0].entries[0].locations == std::vector<uint32_t>{1});
}

TEST_CASE("plain index covers every occurrence exactly once") {
  SyntheticConfig cfg;
  cfg.num_docs = 20;
  cfg.tokens_per_doc = 50;
  cfg.seed = 99;
  Corpus corpus = make_synthetic_corpus(cfg);
  auto truth = rescan(corpus);
  auto index = build_plain_index(corpus);

  size_t triples = 0;
  for (const auto& list : index) {
    auto it = truth.find(list.keyword);
    REQUIRE(it != truth.end());
    for (const auto& posting : list.entries) {
      auto doc_it = it->second.find(posting.doc_id);
      REQUIRE(doc_it != it->second.end());
      CHECK(posting.locations == doc_it->second);
      triples += posting.locations.size();
      // ascending, 1-based
      for (size_t i = 1; i < posting.locations.size(); ++i)
        CHECK(posting.locations[i - 1] < posting.locations[i]);
    }
  }
  size_t expected_triples = 0;
  for (const auto& [kw, docs] : truth)
    for (const auto& [id, locs] : docs) expected_triples += locs.size();
  CHECK(triples == expected_triples);
}

TEST_CASE("plain index rejects bad corpora") {
  CHECK_THROWS_AS(build_plain_index({}), Error);
  CHECK_THROWS_AS(build_plain_index({{1, "a"}, {1, "b"}}), Error);
  CHECK_THROWS_AS(build_plain_index({{0, "a"}}), Error);
  CHECK_THROWS_AS(build_plain_index({{-3, "a"}}), Error);
}

TEST_CASE("eta is the lower median of document frequencies") {
  auto eta_of = [](std::vector<uint32_t> freqs) {
    return choose_eta(build_plain_index(make_frequency_corpus(freqs)));
  };
  CHECK(eta_of({1, 1, 1}) == 1);
  CHECK(eta_of({1, 2, 3, 4}) == 2);
  CHECK(eta_of({5}) == 5);
  CHECK(eta_of({2, 9, 4, 7, 30}) == 7);
  CHECK_THROWS_AS(choose_eta({}), Error);
}

TEST_CASE("division and padding") {
  PlainInvertedList list{"kw",
                         {{10, {1}}, {20, {2, 3}}, {30, {4}}}};

  SUBCASE("k=3, eta=2: two fragments, one pad") {
    int64_t counter = -1;
    auto frags = divide_and_pad(list, 2, counter);
    REQUIRE(frags.size() == 2);
    CHECK(frags[0].entries.size() == 2);
    CHECK(frags[1].entries.size() == 2);
    CHECK(frags[1].entries[0].doc_id == 30);
    CHECK(frags[1].entries[1].doc_id == -1);
    CHECK(frags[1].entries[1].is_pad());
    CHECK(counter == -2);
  }

  SUBCASE("k == eta: one fragment, no padding") {
    int64_t counter = -1;
    auto frags = divide_and_pad(list, 3, counter);
    REQUIRE(frags.size() == 1);
    CHECK(frags[0].entries.size() == 3);
    for (const auto& e : frags[0].entries) CHECK_FALSE(e.is_pad());
    CHECK(counter == -1);
  }

  SUBCASE("k=1, eta=4: pads -1, -2, -3") {
    PlainInvertedList single{"kw", {{10, {1}}}};
    int64_t counter = -1;
    auto frags = divide_and_pad(single, 4, counter);
    REQUIRE(frags.size() == 1);
    REQUIRE(frags[0].entries.size() == 4);
    CHECK(frags[0].entries[1].doc_id == -1);
    CHECK(frags[0].entries[2].doc_id == -2);
    CHECK(frags[0].entries[3].doc_id == -3);
  }

  SUBCASE("counter is shared across lists") {
    int64_t counter = -1;
    PlainInvertedList a{"a", {{1, {1}}}};
    PlainInvertedList b{"b", {{2, {1}}}};
    auto fa = divide_and_pad(a, 2, counter);
    auto fb = divide_and_pad(b, 2, counter);
    CHECK(fa[0].entries[1].doc_id == -1);
    CHECK(fb[0].entries[1].doc_id == -2);
  }
}

TEST_CASE("doc id permutation is invertible over both sub-domains") {
  const auto& mk = test::shared_master_key();
  for (int64_t id : {int64_t{1}, int64_t{42}, int64_t{999999}, int64_t{-1}, int64_t{-7}}) {
    auto enc = encrypt_doc_id(mk, id);
    CHECK(decrypt_doc_id(mk, enc) == id);
  }
  // injectivity over a small range
  std::set<std::array<uint8_t, 8>> seen;
  for (int64_t id = -100; id <= 100; ++id)
    if (id != 0) seen.insert(encrypt_doc_id(mk, id));
  CHECK(seen.size() == 200);
}

TEST_CASE("encrypted index: structure, coverage and round trip") {
  const auto& mk = test::shared_master_key();
  BgnEncryptor enc(mk.bgn.pk);
  const CurveGroup& group = enc.group();
  Corpus corpus = make_miniature_corpus();
  Rng rng(100);

  auto build = build_secure_index(mk, enc, corpus, 2, rng);
  const SecureIndex& index = build.index;
  CHECK(build.eta == 2);
  CHECK(index.params_digest == mk.public_params().digest());

  auto plain = build_plain_index(corpus);
  size_t expected_lists = 0;
  for (const auto& list : plain)
    expected_lists += (list.entries.size() + 1) / 2;
  CHECK(index.lists.size() == expected_lists);

  // every list has exactly eta entries; every entry parses as valid points
  for (const auto& list : index.lists) {
    CHECK(list.entries.size() == index.eta);
    for (const auto& entry : list.entries)
      for (const auto& loc : entry.enc_locations) {
        CHECK(group.is_on_curve(loc));
        CHECK_FALSE(loc.infinity);
      }
  }

  // coverage: decrypting every real entry reconstructs the plain index
  std::map<std::string, std::map<int64_t, std::vector<uint32_t>>> recovered;
  Rng probe_rng(101);
  for (const auto& plain_list : plain) {
    auto probe = enc_keyword_for_trapdoor(mk.knn, plain_list.keyword, probe_rng);
    for (const auto& sec_list : index.lists) {
      if (!knn_match(probe, sec_list.keyword_id)) continue;
      for (const auto& entry : sec_list.entries) {
        int64_t doc_id = decrypt_doc_id(mk, entry.enc_doc_id);
        if (doc_id <= 0) continue;  // pad
        auto& locs = recovered[plain_list.keyword][doc_id];
        for (const auto& c : entry.enc_locations)
          locs.push_back(static_cast<uint32_t>(
              bgn_decrypt(group, mk.bgn.sk, c, mk.bgn.pk.msg_bound)));
      }
    }
  }
  for (const auto& plain_list : plain) {
    auto& docs = recovered[plain_list.keyword];
    REQUIRE(docs.size() == plain_list.entries.size());
    for (const auto& posting : plain_list.entries) {
      auto locs = docs[posting.doc_id];
      std::sort(locs.begin(), locs.end());
      CHECK(locs == posting.locations);
    }
  }
}

TEST_CASE("fragments of one keyword carry distinct but matchable ids") {
  const auto& mk = test::shared_master_key();
  BgnEncryptor enc(mk.bgn.pk);
  Rng rng(102);
  Corpus corpus = make_miniature_corpus();
  auto build = build_secure_index(mk, enc, corpus, 2, rng);

  auto probe = enc_keyword_for_trapdoor(mk.knn, "attack", rng);
  std::vector<const SecureInvertedList*> matched;
  for (const auto& list : build.index.lists)
    if (knn_match(probe, list.keyword_id)) matched.push_back(&list);
  REQUIRE(matched.size() == 2);  // freq 3, eta 2
  CHECK(matched[0]->keyword_id.bytes() != matched[1]->keyword_id.bytes());
}

TEST_CASE("pad entries are format-identical to real entries") {
  const auto& mk = test::shared_master_key();
  BgnEncryptor enc(mk.bgn.pk);
  const CurveGroup& group = enc.group();
  Rng rng(103);
  Corpus corpus = make_miniature_corpus();
  auto build = build_secure_index(mk, enc, corpus, 2, rng);

  size_t pads_seen = 0;
  for (const auto& list : build.index.lists) {
    std::set<size_t> real_sizes;
    std::vector<size_t> pad_sizes;
    for (const auto& entry : list.entries) {
      size_t size = secure_entry_wire_size(group, entry.enc_locations.size());
      ByteWriter w;
      w.raw(entry.enc_doc_id.data(), 8);
      w.u32(static_cast<uint32_t>(entry.enc_locations.size()));
      for (const auto& loc : entry.enc_locations) group.serialize(loc, w);
      CHECK(w.size() == size);  // the size function matches the actual layout
      if (decrypt_doc_id(mk, entry.enc_doc_id) > 0)
        real_sizes.insert(size);
      else
        pad_sizes.push_back(size);
    }
    for (size_t ps : pad_sizes) {
      ++pads_seen;
      CHECK(real_sizes.count(ps) == 1);  // byte-length identical to a real entry
    }
  }
  CHECK(pads_seen > 0);
}

TEST_CASE("index encryption is reproducible from a fixed seed") {
  const auto& mk = test::shared_master_key();
  BgnEncryptor enc(mk.bgn.pk);
  Corpus corpus = make_miniature_corpus();

  Rng rng1(7777), rng2(7777), rng3(8888);
  auto b1 = build_secure_index(mk, enc, corpus, 2, rng1);
  auto b2 = build_secure_index(mk, enc, corpus, 2, rng2);
  auto b3 = build_secure_index(mk, enc, corpus, 2, rng3);

  Bytes s1 = b1.index.serialize(enc.group());
  Bytes s2 = b2.index.serialize(enc.group());
  Bytes s3 = b3.index.serialize(enc.group());
  CHECK(s1 == s2);
  CHECK(s1 != s3);  // fresh randomness changes the ciphertexts
}

TEST_CASE("index file round trips through the binary format") {
  const auto& mk = test::shared_master_key();
  BgnEncryptor enc(mk.bgn.pk);
  Rng rng(104);
  auto build = build_secure_index(mk, enc, make_miniature_corpus(), 2, rng);

  Bytes bytes = build.index.serialize(enc.group());
  SecureIndex parsed = SecureIndex::parse(bytes, enc.group());
  CHECK(parsed.eta == build.index.eta);
  CHECK(parsed.d == build.index.d);
  CHECK(parsed.params_digest == build.index.params_digest);
  CHECK(parsed.serialize(enc.group()) == bytes);

  Bytes truncated(bytes.begin(), bytes.end() - 5);
  CHECK_THROWS_AS(SecureIndex::parse(truncated, enc.group()), ParseError);
}

TEST_CASE("documents beyond the message bound are rejected") {
  Rng rng(105);
  MasterKey mk = master_keygen(16, 8, rng);  // msg_bound 2^12 at tau=16
  BgnEncryptor enc(mk.bgn.pk);
  std::string longdoc;
  for (int i = 0; i < 5000; ++i) longdoc += "w" + std::to_string(i) + " ";
  Corpus corpus{{1, longdoc}};
  CHECK_THROWS_AS(build_secure_index(mk, enc, corpus, std::nullopt, rng), Error);
}

TEST_CASE("master key file round trips") {
  const auto& mk = test::shared_master_key();
  Bytes b = mk.serialize();
  MasterKey mk2 = MasterKey::parse(b);
  CHECK(mk2.serialize() == b);
  CHECK(mk2.public_params() == mk.public_params());
  CHECK(mk2.bgn.sk.p == mk.bgn.sk.p);
}
