#pragma once

#include <memory>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "p3/engine.hpp"
#include "p3/public_params.hpp"
#include "p3/wire.hpp"

namespace p3 {

struct EncryptedDocRecord {
  std::array<uint8_t, 8> enc_doc_id{};
  Bytes ciphertext;
};

// Payload codecs shared by the three parties.
Bytes encode_publish_payload(const PublicParams& params, const Bytes& index_bytes);
Bytes encode_put_docs_payload(const std::vector<EncryptedDocRecord>& docs);
std::vector<EncryptedDocRecord> decode_put_docs_payload(std::span<const uint8_t> p);
Bytes encode_query_result_payload(const QueryStats& stats,
                                  const std::vector<EncryptedDocRecord>& matches);
struct QueryResultPayload {
  QueryStats stats;
  std::vector<EncryptedDocRecord> matches;
};
QueryResultPayload decode_query_result_payload(std::span<const uint8_t> p);

// Owner-endpoint request framing (both ride the trapdoor message kinds).
enum class OwnerOp : uint8_t { kTrapdoor = 0, kReveal = 1 };
Bytes encode_trapdoor_request(bool conjunctive, std::string_view phrase);
Bytes encode_reveal_request(const std::vector<EncryptedDocRecord>& docs);
struct RevealedDoc {
  int64_t doc_id;
  std::string text;
};
Bytes encode_reveal_response(const std::vector<RevealedDoc>& docs);
std::vector<RevealedDoc> decode_reveal_response(std::span<const uint8_t> p);

// Cloud-side state: one immutable index snapshot shared by all request
// threads, plus the append-only encrypted document store. Holds only public
// material.
class CloudState {
 public:
  void publish(PublicParams params, SecureIndex index);
  void put_docs(std::vector<EncryptedDocRecord> docs);
  bool has_index() const;

  struct QueryOutput {
    QueryResult result;
    std::vector<EncryptedDocRecord> matches;
  };
  QueryOutput query(std::span<const uint8_t> trapdoor_bytes) const;

 private:
  struct Loaded {
    PublicParams params;
    CurveGroup group;
    SecureIndex index;
    Loaded(PublicParams p, SecureIndex i)
        : params(std::move(p)), group(params.group), index(std::move(i)) {}
  };

  mutable std::mutex mu_;
  std::shared_ptr<const Loaded> loaded_;
  std::unordered_map<uint64_t, Bytes> docs_;
};

// TCP front end for CloudState; one thread per connection.
class CloudServer {
 public:
  CloudServer() = default;
  ~CloudServer();

  uint16_t start(uint16_t port = 0);
  void stop();
  CloudState& state() { return state_; }

 private:
  void serve_connection(TcpStream stream);

  CloudState state_;
  std::optional<TcpListener> listener_;
  std::thread accept_thread_;
  std::mutex conn_mu_;
  std::vector<std::thread> conn_threads_;
};

// The querying user. Obtains a trapdoor from the owner, sends exactly one
// QUERY to the cloud server, and asks the owner to reveal the returned
// documents. Records a transcript of every exchange for the
// single-interaction checks.
class UserClient {
 public:
  struct Endpoint {
    std::string host;
    uint16_t port;
  };

  UserClient(Endpoint owner, Endpoint server)
      : owner_(std::move(owner)), server_(std::move(server)) {}

  struct TranscriptEvent {
    std::string peer;  // "owner" or "server"
    MsgKind kind;
    bool outbound;
    size_t frame_bytes;
  };

  struct Outcome {
    std::vector<RevealedDoc> hits;
    QueryStats stats;
    std::vector<TranscriptEvent> transcript;
    size_t bytes_to_server = 0;
    size_t bytes_from_server = 0;
  };

  Outcome search(const std::string& phrase, bool conjunctive = false);

 private:
  WireMessage roundtrip(const Endpoint& ep, const std::string& peer,
                        const WireMessage& request, std::vector<TranscriptEvent>& events,
                        size_t* sent = nullptr, size_t* received = nullptr);

  Endpoint owner_;
  Endpoint server_;
};

}  // namespace p3
