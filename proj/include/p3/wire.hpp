#pragma once

#include <optional>
#include <string>

#include "p3/bytes.hpp"

namespace p3 {

// Frame layout: "P3WP" | version u16 | kind u8 | payload length u32 |
// payload | crc32 u32. The CRC covers version through payload.
inline constexpr uint16_t kWireVersion = 1;
inline constexpr uint32_t kMaxFrameLen = 256u << 20;

enum class MsgKind : uint8_t {
  kPublishIndex = 1,
  kPutDocs = 2,
  kQuery = 3,
  kQueryResult = 4,
  kTrapdoorRequest = 5,
  kTrapdoorResponse = 6,
  kError = 7,
};

enum class ErrCode : uint16_t {
  kBadFrame = 1,
  kBadCrc = 2,
  kUnknownKind = 3,
  kBadPayload = 4,
  kNoIndex = 5,
  kParamsMismatch = 6,
  kInternal = 7,
};

struct WireMessage {
  MsgKind kind;
  Bytes payload;
};

Bytes encode_frame(const WireMessage& msg);

struct ErrorPayload {
  ErrCode code;
  std::string message;
};

Bytes encode_error(ErrCode code, std::string_view message);
ErrorPayload decode_error(std::span<const uint8_t> payload);

// Blocking TCP stream with frame send/receive. recv_msg distinguishes a
// clean shutdown (nullopt), a recoverable bad frame (kBadFrame/kBadCrc/
// kUnknownKind status), and transport failure (throws).
class TcpStream {
 public:
  explicit TcpStream(int fd) : fd_(fd) {}
  TcpStream(TcpStream&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  TcpStream& operator=(TcpStream&&) = delete;
  TcpStream(const TcpStream&) = delete;
  ~TcpStream();

  struct Received {
    enum class Status { kOk, kEof, kBadFrame } status;
    std::optional<ErrCode> error;  // set for kBadFrame
    WireMessage msg;               // valid for kOk
    size_t frame_bytes = 0;        // size on the wire, both outcomes
  };

  void send_msg(const WireMessage& msg);
  // Raw frame bytes, unvalidated (proxies and fault-injection tests).
  void send_raw(std::span<const uint8_t> frame);
  Received recv_msg();
  size_t bytes_sent() const { return bytes_sent_; }
  size_t bytes_received() const { return bytes_received_; }

 private:
  void send_all(const uint8_t* data, size_t len);
  bool recv_exact(uint8_t* data, size_t len, bool eof_ok);

  int fd_;
  size_t bytes_sent_ = 0;
  size_t bytes_received_ = 0;
};

TcpStream tcp_connect(const std::string& host, uint16_t port);

class TcpListener {
 public:
  // Binds to 127.0.0.1; port 0 picks an ephemeral port.
  static TcpListener bind_loopback(uint16_t port);
  TcpListener(TcpListener&& o) noexcept;
  ~TcpListener();

  uint16_t port() const { return port_; }
  std::optional<TcpStream> accept();  // nullopt once closed
  void close();

 private:
  TcpListener(int fd, uint16_t port) : fd_(fd), port_(port) {}
  int fd_;
  uint16_t port_;
};

}  // namespace p3
