#pragma once

#include "p3/index_builder.hpp"
#include "p3/trapdoor_gen.hpp"

namespace p3 {

// Owner-side runtime: master key plus the precomputed encryptor tables.
// Stateless per request; safe to share behind the service mutex.
class OwnerContext {
 public:
  explicit OwnerContext(MasterKey mk) : mk_(std::move(mk)), enc_(mk_.bgn.pk) {}

  const MasterKey& mk() const { return mk_; }
  const BgnEncryptor& encryptor() const { return enc_; }
  const CurveGroup& group() const { return enc_.group(); }

  Bytes make_trapdoor_bytes(const std::string& phrase, bool conjunctive, Rng& rng) const;

  // Decrypts the returned ids and document bodies; ids in the reserved pad
  // sub-domain (negative after PRP inversion) are silently dropped.
  std::vector<RevealedDoc> reveal(const std::vector<EncryptedDocRecord>& docs) const;

 private:
  MasterKey mk_;
  BgnEncryptor enc_;
};

// TCP front end serving TRAPDOOR_REQUEST messages (trapdoor issuance and
// decryption assistance). Never handles index or query traffic.
class OwnerService {
 public:
  explicit OwnerService(MasterKey mk, uint64_t rng_seed);
  explicit OwnerService(MasterKey mk);  // OS-entropy randomness
  ~OwnerService();

  uint16_t start(uint16_t port = 0);
  void stop();
  const OwnerContext& context() const { return ctx_; }

 private:
  void serve_connection(TcpStream stream);

  OwnerContext ctx_;
  std::mutex rng_mu_;
  Rng rng_;
  std::optional<TcpListener> listener_;
  std::thread accept_thread_;
  std::mutex conn_mu_;
  std::vector<std::thread> conn_threads_;
};

}  // namespace p3
