#pragma once

#include <filesystem>

#include "p3/bgn_owner.hpp"
#include "p3/knn_owner.hpp"
#include "p3/public_params.hpp"

namespace p3 {

// Everything the data owner keeps: the BGN key pair, the keyword-matching
// secrets, the document-id permutation key and the document body key.
struct MasterKey {
  BgnKeyPair bgn;
  KnnSecrets knn;
  Bytes prp_key;  // 32 bytes
  Bytes doc_key;  // 32 bytes

  PublicParams public_params() const;

  Bytes serialize() const;
  static MasterKey parse(std::span<const uint8_t> buf);
  void save(const std::filesystem::path& path) const;
  static MasterKey load(const std::filesystem::path& path);
};

struct MasterKeygenOptions {
  BgnKeygenOptions bgn;
};

MasterKey master_keygen(unsigned tau, uint16_t d, Rng& rng,
                        const MasterKeygenOptions& opts = {});

// Small file helpers shared by the CLI and tests.
Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const uint8_t> data);

}  // namespace p3
