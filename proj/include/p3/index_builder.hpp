#pragma once

#include <optional>

#include "p3/master_key.hpp"
#include "p3/secure_index.hpp"
#include "p3/service.hpp"
#include "p3/tokenizer.hpp"

namespace p3 {

// One posting of a plaintext inverted list. Padding entries (added by
// divide_and_pad) carry a negative doc_id and no locations; their fake
// locations are drawn at encryption time.
struct PlainPosting {
  int64_t doc_id;
  std::vector<uint32_t> locations;  // strictly ascending, 1-based
  bool is_pad() const { return doc_id < 0; }
};

struct PlainInvertedList {
  std::string keyword;
  std::vector<PlainPosting> entries;
};

// One list per distinct keyword, sorted by keyword; every token occurrence
// of the corpus appears exactly once. Throws on duplicate or non-positive
// doc ids and on an empty corpus.
std::vector<PlainInvertedList> build_plain_index(const Corpus& corpus);

// Lower median of the per-keyword document frequencies.
uint32_t choose_eta(const std::vector<PlainInvertedList>& index);

// Splits a list into ceil(k/eta) fragments of exactly eta entries; the last
// fragment is filled with padding entries numbered pad_counter, pad_counter-1,
// ... The counter is shared across the whole index build so padding ids stay
// globally unique (the PRP then keeps their encryptions distinct).
std::vector<PlainInvertedList> divide_and_pad(const PlainInvertedList& list, uint32_t eta,
                                              int64_t& pad_counter);

// Encrypts fragments into the secure index: fresh keyword id per fragment,
// PRP-encrypted doc ids, BGN-encrypted locations, uniformly random group
// elements for pad locations (count drawn from the fragment's real entries so
// pads are byte-identical to real entries), and a final shuffle of list order.
SecureIndex encrypt_index(const MasterKey& mk, const BgnEncryptor& enc,
                          const std::vector<PlainInvertedList>& fragments, uint32_t eta,
                          Rng& rng);

struct SecureIndexBuild {
  SecureIndex index;
  uint32_t eta;
};

// Full pipeline: plain index, eta (median unless overridden), division and
// padding, encryption.
SecureIndexBuild build_secure_index(const MasterKey& mk, const BgnEncryptor& enc,
                                    const Corpus& corpus,
                                    std::optional<uint32_t> eta_override, Rng& rng);

std::array<uint8_t, 8> encrypt_doc_id(const MasterKey& mk, int64_t id);
int64_t decrypt_doc_id(const MasterKey& mk, const std::array<uint8_t, 8>& enc);

std::vector<EncryptedDocRecord> encrypt_corpus_docs(const MasterKey& mk,
                                                    const Corpus& corpus, Rng& rng);

}  // namespace p3
