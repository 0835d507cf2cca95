#include "p3/index_builder.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "p3/error.hpp"
#include "p3/owner_crypto.hpp"

namespace p3 {

std::vector<PlainInvertedList> build_plain_index(const Corpus& corpus) {
  if (corpus.empty()) throw Error("empty corpus");
  std::set<int64_t> seen;
  std::map<std::string, std::vector<PlainPosting>> lists;
  for (const auto& [doc_id, text] : corpus) {
    if (doc_id <= 0) throw Error("document ids must be positive");
    if (!seen.insert(doc_id).second)
      throw Error("duplicate document id " + std::to_string(doc_id));
    for (const auto& token : tokenize(text)) {
      auto& postings = lists[token.text];
      if (postings.empty() || postings.back().doc_id != doc_id)
        postings.push_back({doc_id, {}});
      postings.back().locations.push_back(token.position);
    }
  }
  std::vector<PlainInvertedList> index;
  index.reserve(lists.size());
  for (auto& [keyword, postings] : lists)
    index.push_back({keyword, std::move(postings)});
  return index;
}

uint32_t choose_eta(const std::vector<PlainInvertedList>& index) {
  if (index.empty()) throw Error("empty index");
  std::vector<size_t> freqs;
  freqs.reserve(index.size());
  for (const auto& list : index) freqs.push_back(list.entries.size());
  std::sort(freqs.begin(), freqs.end());
  return static_cast<uint32_t>(freqs[(freqs.size() - 1) / 2]);
}

std::vector<PlainInvertedList> divide_and_pad(const PlainInvertedList& list, uint32_t eta,
                                              int64_t& pad_counter) {
  if (eta == 0) throw Error("eta must be positive");
  if (list.entries.empty()) throw Error("cannot divide an empty inverted list");
  std::vector<PlainInvertedList> fragments;
  size_t k = list.entries.size();
  size_t nfrag = (k + eta - 1) / eta;
  fragments.reserve(nfrag);
  for (size_t f = 0; f < nfrag; ++f) {
    PlainInvertedList frag;
    frag.keyword = list.keyword;
    size_t begin = f * eta;
    size_t end = std::min(begin + eta, k);
    frag.entries.assign(list.entries.begin() + begin, list.entries.begin() + end);
    while (frag.entries.size() < eta) frag.entries.push_back({pad_counter--, {}});
    fragments.push_back(std::move(frag));
  }
  return fragments;
}

std::array<uint8_t, 8> encrypt_doc_id(const MasterKey& mk, int64_t id) {
  FeistelPrp prp(mk.prp_key);
  uint64_t enc = prp.encrypt(static_cast<uint64_t>(id));
  std::array<uint8_t, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(enc >> (56 - 8 * i));
  return out;
}

int64_t decrypt_doc_id(const MasterKey& mk, const std::array<uint8_t, 8>& enc) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | enc[i];
  FeistelPrp prp(mk.prp_key);
  return static_cast<int64_t>(prp.decrypt(v));
}

SecureIndex encrypt_index(const MasterKey& mk, const BgnEncryptor& enc,
                          const std::vector<PlainInvertedList>& fragments, uint32_t eta,
                          Rng& rng) {
  const CurveGroup& group = enc.group();
  FeistelPrp prp(mk.prp_key);

  SecureIndex index;
  index.params_digest = mk.public_params().digest();
  index.d = mk.knn.d;
  index.eta = eta;
  index.lists.reserve(fragments.size());

  for (const auto& frag : fragments) {
    if (frag.entries.size() != eta) throw Error("fragment length differs from eta");
    std::vector<size_t> real_loc_counts;
    for (const auto& posting : frag.entries)
      if (!posting.is_pad()) real_loc_counts.push_back(posting.locations.size());
    if (real_loc_counts.empty()) throw Error("fragment contains no real entries");

    SecureInvertedList list;
    list.keyword_id = enc_keyword_for_index(mk.knn, frag.keyword, rng);
    list.entries.reserve(eta);
    for (const auto& posting : frag.entries) {
      SecureEntry entry;
      uint64_t enc_id = prp.encrypt(static_cast<uint64_t>(posting.doc_id));
      for (int i = 0; i < 8; ++i)
        entry.enc_doc_id[i] = static_cast<uint8_t>(enc_id >> (56 - 8 * i));
      if (posting.is_pad()) {
        size_t count = real_loc_counts[rng.below(real_loc_counts.size())];
        entry.enc_locations.reserve(count);
        for (size_t i = 0; i < count; ++i) entry.enc_locations.push_back(group.sample(rng));
      } else {
        entry.enc_locations.reserve(posting.locations.size());
        for (uint32_t loc : posting.locations) {
          if (loc >= enc.pk().msg_bound)
            throw Error("document longer than the configured message bound");
          entry.enc_locations.push_back(enc.encrypt(loc, rng));
        }
      }
      list.entries.push_back(std::move(entry));
    }
    index.lists.push_back(std::move(list));
  }

  // Fisher-Yates over list order; the on-disk layout must not follow keyword
  // order.
  for (size_t i = index.lists.size(); i > 1; --i)
    std::swap(index.lists[i - 1], index.lists[rng.below(i)]);
  return index;
}

SecureIndexBuild build_secure_index(const MasterKey& mk, const BgnEncryptor& enc,
                                    const Corpus& corpus,
                                    std::optional<uint32_t> eta_override, Rng& rng) {
  auto plain = build_plain_index(corpus);
  uint32_t eta = eta_override.value_or(choose_eta(plain));
  if (eta == 0) throw Error("eta must be positive");
  std::vector<PlainInvertedList> fragments;
  int64_t pad_counter = -1;
  for (const auto& list : plain) {
    auto frags = divide_and_pad(list, eta, pad_counter);
    for (auto& f : frags) fragments.push_back(std::move(f));
  }
  return {encrypt_index(mk, enc, fragments, eta, rng), eta};
}

std::vector<EncryptedDocRecord> encrypt_corpus_docs(const MasterKey& mk,
                                                    const Corpus& corpus, Rng& rng) {
  std::vector<EncryptedDocRecord> docs;
  docs.reserve(corpus.size());
  for (const auto& [doc_id, text] : corpus) {
    EncryptedDocRecord rec;
    rec.enc_doc_id = encrypt_doc_id(mk, doc_id);
    rec.ciphertext = aead_seal(
        mk.doc_key,
        std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(text.data()), text.size()),
        rng);
    docs.push_back(std::move(rec));
  }
  return docs;
}

}  // namespace p3
