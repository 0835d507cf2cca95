#include "p3/owner_service.hpp"

#include "p3/error.hpp"
#include "p3/owner_crypto.hpp"

namespace p3 {

Bytes OwnerContext::make_trapdoor_bytes(const std::string& phrase, bool conjunctive,
                                        Rng& rng) const {
  PhraseQuery query = PhraseQuery::from_phrase(phrase);
  Trapdoor t = gen_trapdoor(mk_, enc_, query, rng, conjunctive);
  return t.serialize(enc_.group());
}

std::vector<RevealedDoc> OwnerContext::reveal(
    const std::vector<EncryptedDocRecord>& docs) const {
  std::vector<RevealedDoc> out;
  out.reserve(docs.size());
  for (const auto& rec : docs) {
    int64_t doc_id = decrypt_doc_id(mk_, rec.enc_doc_id);
    if (doc_id <= 0) continue;  // padding entry leaked into a result set
    RevealedDoc d;
    d.doc_id = doc_id;
    if (!rec.ciphertext.empty()) {
      Bytes plain = aead_open(mk_.doc_key, rec.ciphertext);
      d.text.assign(plain.begin(), plain.end());
    }
    out.push_back(std::move(d));
  }
  return out;
}

OwnerService::OwnerService(MasterKey mk, uint64_t rng_seed)
    : ctx_(std::move(mk)), rng_(rng_seed) {}

OwnerService::OwnerService(MasterKey mk) : ctx_(std::move(mk)), rng_() {}

OwnerService::~OwnerService() { stop(); }

uint16_t OwnerService::start(uint16_t port) {
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

void OwnerService::stop() {
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

void OwnerService::serve_connection(TcpStream stream) {
  for (;;) {
    TcpStream::Received in = stream.recv_msg();
    if (in.status == TcpStream::Received::Status::kEof) return;
    if (in.status == TcpStream::Received::Status::kBadFrame) {
      try {
        stream.send_msg({MsgKind::kError,
                         encode_error(*in.error, "malformed frame rejected")});
      } catch (const Error&) {
      }
      return;
    }

    WireMessage reply;
    try {
      if (in.msg.kind != MsgKind::kTrapdoorRequest) {
        reply = {MsgKind::kError,
                 encode_error(ErrCode::kUnknownKind, "owner serves trapdoor requests only")};
      } else {
        ByteReader r(in.msg.payload);
        auto op = static_cast<OwnerOp>(r.u8());
        if (op == OwnerOp::kTrapdoor) {
          bool conjunctive = r.u8() == 1;
          std::string phrase = r.str();
          if (!r.done()) throw ParseError("trailing bytes in trapdoor request");
          Rng request_rng = [&] {
            std::lock_guard lock(rng_mu_);
            return rng_.fork();
          }();
          ByteWriter w;
          w.blob(ctx_.make_trapdoor_bytes(phrase, conjunctive, request_rng));
          reply = {MsgKind::kTrapdoorResponse, w.take()};
        } else if (op == OwnerOp::kReveal) {
          uint32_t count = r.u32();
          std::vector<EncryptedDocRecord> docs;
          docs.reserve(count);
          for (uint32_t i = 0; i < count; ++i) {
            EncryptedDocRecord rec;
            auto id = r.raw(8);
            std::copy(id.begin(), id.end(), rec.enc_doc_id.begin());
            auto ct = r.blob();
            rec.ciphertext.assign(ct.begin(), ct.end());
            docs.push_back(std::move(rec));
          }
          if (!r.done()) throw ParseError("trailing bytes in reveal request");
          reply = {MsgKind::kTrapdoorResponse, encode_reveal_response(ctx_.reveal(docs))};
        } else {
          throw ParseError("unknown owner operation");
        }
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

}  // namespace p3
