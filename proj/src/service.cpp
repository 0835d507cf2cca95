#include "p3/service.hpp"

#include <cstring>

#include "p3/error.hpp"

namespace p3 {

namespace {

uint64_t id_key(const std::array<uint8_t, 8>& id) {
  uint64_t k;
  std::memcpy(&k, id.data(), 8);
  return k;
}

void write_doc_record(ByteWriter& w, const EncryptedDocRecord& doc) {
  w.raw(doc.enc_doc_id.data(), doc.enc_doc_id.size());
  w.blob(doc.ciphertext);
}

EncryptedDocRecord read_doc_record(ByteReader& r) {
  EncryptedDocRecord doc;
  auto id = r.raw(8);
  std::copy(id.begin(), id.end(), doc.enc_doc_id.begin());
  auto ct = r.blob();
  doc.ciphertext.assign(ct.begin(), ct.end());
  return doc;
}

}  // namespace

Bytes encode_publish_payload(const PublicParams& params, const Bytes& index_bytes) {
  ByteWriter w;
  w.blob(params.serialize());
  w.blob(index_bytes);
  return w.take();
}

Bytes encode_put_docs_payload(const std::vector<EncryptedDocRecord>& docs) {
  ByteWriter w;
  w.u32(static_cast<uint32_t>(docs.size()));
  for (const auto& d : docs) write_doc_record(w, d);
  return w.take();
}

std::vector<EncryptedDocRecord> decode_put_docs_payload(std::span<const uint8_t> p) {
  ByteReader r(p);
  uint32_t count = r.u32();
  std::vector<EncryptedDocRecord> docs;
  docs.reserve(count);
  for (uint32_t i = 0; i < count; ++i) docs.push_back(read_doc_record(r));
  if (!r.done()) throw ParseError("trailing bytes in document payload");
  return docs;
}

Bytes encode_query_result_payload(const QueryStats& stats,
                                  const std::vector<EncryptedDocRecord>& matches) {
  ByteWriter w;
  w.u64(stats.lists_scanned);
  w.u64(stats.pairings_evaluated);
  w.u64(stats.candidates_tested);
  w.u32(static_cast<uint32_t>(matches.size()));
  for (const auto& m : matches) write_doc_record(w, m);
  return w.take();
}

QueryResultPayload decode_query_result_payload(std::span<const uint8_t> p) {
  ByteReader r(p);
  QueryResultPayload out;
  out.stats.lists_scanned = r.u64();
  out.stats.pairings_evaluated = r.u64();
  out.stats.candidates_tested = r.u64();
  uint32_t count = r.u32();
  out.matches.reserve(count);
  for (uint32_t i = 0; i < count; ++i) out.matches.push_back(read_doc_record(r));
  if (!r.done()) throw ParseError("trailing bytes in query result");
  return out;
}

Bytes encode_trapdoor_request(bool conjunctive, std::string_view phrase) {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(OwnerOp::kTrapdoor));
  w.u8(conjunctive ? 1 : 0);
  w.str(phrase);
  return w.take();
}

Bytes encode_reveal_request(const std::vector<EncryptedDocRecord>& docs) {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(OwnerOp::kReveal));
  w.u32(static_cast<uint32_t>(docs.size()));
  for (const auto& d : docs) write_doc_record(w, d);
  return w.take();
}

Bytes encode_reveal_response(const std::vector<RevealedDoc>& docs) {
  ByteWriter w;
  w.u32(static_cast<uint32_t>(docs.size()));
  for (const auto& d : docs) {
    w.u64(static_cast<uint64_t>(d.doc_id));
    w.str(d.text);
  }
  return w.take();
}

std::vector<RevealedDoc> decode_reveal_response(std::span<const uint8_t> p) {
  ByteReader r(p);
  uint32_t count = r.u32();
  std::vector<RevealedDoc> docs;
  docs.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    RevealedDoc d;
    d.doc_id = static_cast<int64_t>(r.u64());
    d.text = r.str();
    docs.push_back(std::move(d));
  }
  if (!r.done()) throw ParseError("trailing bytes in reveal response");
  return docs;
}

void CloudState::publish(PublicParams params, SecureIndex index) {
  if (index.params_digest != params.digest())
    throw Error("index was built for different public parameters");
  if (params.knn_dim != index.d) throw Error("index dimension differs from parameters");
  auto loaded = std::make_shared<Loaded>(std::move(params), std::move(index));
  std::lock_guard lock(mu_);
  loaded_ = std::move(loaded);
}

void CloudState::put_docs(std::vector<EncryptedDocRecord> docs) {
  std::lock_guard lock(mu_);
  for (auto& d : docs) docs_[id_key(d.enc_doc_id)] = std::move(d.ciphertext);
}

bool CloudState::has_index() const {
  std::lock_guard lock(mu_);
  return loaded_ != nullptr;
}

CloudState::QueryOutput CloudState::query(std::span<const uint8_t> trapdoor_bytes) const {
  std::shared_ptr<const Loaded> snapshot;
  {
    std::lock_guard lock(mu_);
    snapshot = loaded_;
  }
  if (!snapshot) throw Error("no index published");

  Trapdoor t = Trapdoor::parse(trapdoor_bytes, snapshot->group);
  QueryEngine engine(snapshot->group, snapshot->index);
  QueryOutput out;
  out.result = engine.execute(t);
  std::lock_guard lock(mu_);
  for (const auto& id : out.result.matches) {
    EncryptedDocRecord rec;
    rec.enc_doc_id = id;
    auto it = docs_.find(id_key(id));
    if (it != docs_.end()) rec.ciphertext = it->second;
    out.matches.push_back(std::move(rec));
  }
  return out;
}

CloudServer::~CloudServer() { stop(); }

uint16_t CloudServer::start(uint16_t port) {
  listener_.emplace(TcpListener::bind_loopback(port));
  uint16_t bound = listener_->port();
  accept_thread_ = std::thread([this] {
    while (auto stream = listener_->accept()) {
      std::lock_guard lock(conn_mu_);
      conn_threads_.emplace_back(
          [this, s = std::move(*stream)]() mutable { serve_connection(std::move(s)); });
    }
  });
  return bound;
}

void CloudServer::stop() {
  if (listener_) listener_->close();
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(conn_mu_);
    threads.swap(conn_threads_);
  }
  for (auto& t : threads)
    if (t.joinable()) t.join();
  listener_.reset();
}

void CloudServer::serve_connection(TcpStream stream) {
  for (;;) {
    TcpStream::Received in = stream.recv_msg();
    if (in.status == TcpStream::Received::Status::kEof) return;
    if (in.status == TcpStream::Received::Status::kBadFrame) {
      // No way to trust the stream past a framing failure: report and drop.
      try {
        stream.send_msg({MsgKind::kError,
                         encode_error(*in.error, "malformed frame rejected")});
      } catch (const Error&) {
      }
      return;
    }

    WireMessage reply;
    try {
      switch (in.msg.kind) {
        case MsgKind::kPublishIndex: {
          ByteReader r(in.msg.payload);
          auto params_blob = r.blob();
          auto index_blob = r.blob();
          if (!r.done()) throw ParseError("trailing bytes in publish payload");
          PublicParams params = PublicParams::parse(params_blob);
          CurveGroup group(params.group);
          SecureIndex index = SecureIndex::parse(index_blob, group);
          if (index.params_digest != params.digest()) {
            reply = {MsgKind::kError, encode_error(ErrCode::kParamsMismatch,
                                                   "index bound to different parameters")};
            break;
          }
          state_.publish(std::move(params), std::move(index));
          reply = {MsgKind::kPublishIndex, {}};
          break;
        }
        case MsgKind::kPutDocs: {
          state_.put_docs(decode_put_docs_payload(in.msg.payload));
          reply = {MsgKind::kPutDocs, {}};
          break;
        }
        case MsgKind::kQuery: {
          if (!state_.has_index()) {
            reply = {MsgKind::kError, encode_error(ErrCode::kNoIndex, "no index published")};
            break;
          }
          ByteReader r(in.msg.payload);
          auto td = r.blob();
          if (!r.done()) throw ParseError("trailing bytes in query payload");
          auto out = state_.query(td);
          reply = {MsgKind::kQueryResult,
                   encode_query_result_payload(out.result.stats, out.matches)};
          break;
        }
        default:
          reply = {MsgKind::kError, encode_error(ErrCode::kUnknownKind,
                                                 "message kind not served here")};
          break;
      }
    } catch (const ParseError& e) {
      reply = {MsgKind::kError, encode_error(ErrCode::kBadPayload, e.what())};
    } catch (const Error& e) {
      reply = {MsgKind::kError, encode_error(ErrCode::kInternal, e.what())};
    }
    try {
      stream.send_msg(reply);
    } catch (const Error&) {
      return;
    }
  }
}

WireMessage UserClient::roundtrip(const Endpoint& ep, const std::string& peer,
                                  const WireMessage& request,
                                  std::vector<TranscriptEvent>& events, size_t* sent,
                                  size_t* received) {
  TcpStream stream = tcp_connect(ep.host, ep.port);
  stream.send_msg(request);
  events.push_back({peer, request.kind, true, stream.bytes_sent()});
  if (sent) *sent += stream.bytes_sent();
  auto in = stream.recv_msg();
  if (in.status != TcpStream::Received::Status::kOk)
    throw Error("connection to " + peer + " failed mid-exchange");
  events.push_back({peer, in.msg.kind, false, in.frame_bytes});
  if (received) *received += in.frame_bytes;
  if (in.msg.kind == MsgKind::kError) {
    auto err = decode_error(in.msg.payload);
    throw Error(peer + " replied with error: " + err.message);
  }
  return std::move(in.msg);
}

UserClient::Outcome UserClient::search(const std::string& phrase, bool conjunctive) {
  Outcome outcome;

  WireMessage trapdoor_reply =
      roundtrip(owner_, "owner",
                {MsgKind::kTrapdoorRequest, encode_trapdoor_request(conjunctive, phrase)},
                outcome.transcript);
  if (trapdoor_reply.kind != MsgKind::kTrapdoorResponse)
    throw Error("owner returned unexpected message kind");
  ByteReader r(trapdoor_reply.payload);
  auto trapdoor_bytes = r.blob();

  ByteWriter qw;
  qw.blob(trapdoor_bytes);
  WireMessage query_reply =
      roundtrip(server_, "server", {MsgKind::kQuery, qw.take()}, outcome.transcript,
                &outcome.bytes_to_server, &outcome.bytes_from_server);
  if (query_reply.kind != MsgKind::kQueryResult)
    throw Error("server returned unexpected message kind");
  auto result = decode_query_result_payload(query_reply.payload);
  outcome.stats = result.stats;

  if (!result.matches.empty()) {
    WireMessage reveal_reply = roundtrip(
        owner_, "owner", {MsgKind::kTrapdoorRequest, encode_reveal_request(result.matches)},
        outcome.transcript);
    if (reveal_reply.kind != MsgKind::kTrapdoorResponse)
      throw Error("owner returned unexpected message kind");
    outcome.hits = decode_reveal_response(reveal_reply.payload);
  }
  return outcome;
}

}  // namespace p3
