#include "p3/wire.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "p3/error.hpp"
#include "p3/hash.hpp"

namespace p3 {

namespace {
constexpr char kMagic[4] = {'P', '3', 'W', 'P'};
constexpr size_t kHeaderLen = 4 + 2 + 1 + 4;
}  // namespace

Bytes encode_frame(const WireMessage& msg) {
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u16(kWireVersion);
  w.u8(static_cast<uint8_t>(msg.kind));
  w.u32(static_cast<uint32_t>(msg.payload.size()));
  w.raw(msg.payload);
  // CRC over version..payload (everything after the magic).
  uint32_t crc = crc32(std::span<const uint8_t>(w.data()).subspan(4));
  w.u32(crc);
  return w.take();
}

Bytes encode_error(ErrCode code, std::string_view message) {
  ByteWriter w;
  w.u16(static_cast<uint16_t>(code));
  w.str(message);
  return w.take();
}

ErrorPayload decode_error(std::span<const uint8_t> payload) {
  ByteReader r(payload);
  ErrorPayload e;
  e.code = static_cast<ErrCode>(r.u16());
  e.message = r.str();
  return e;
}

TcpStream::~TcpStream() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpStream::send_all(const uint8_t* data, size_t len) {
  size_t off = 0;
  while (off < len) {
    ssize_t n = ::send(fd_, data + off, len - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("send failed: ") + std::strerror(errno));
    }
    off += static_cast<size_t>(n);
  }
  bytes_sent_ += len;
}

bool TcpStream::recv_exact(uint8_t* data, size_t len, bool eof_ok) {
  size_t off = 0;
  while (off < len) {
    ssize_t n = ::recv(fd_, data + off, len - off, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("recv failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      if (eof_ok && off == 0) return false;
      throw Error("connection closed mid-frame");
    }
    off += static_cast<size_t>(n);
  }
  bytes_received_ += len;
  return true;
}

void TcpStream::send_msg(const WireMessage& msg) {
  Bytes frame = encode_frame(msg);
  send_all(frame.data(), frame.size());
}

void TcpStream::send_raw(std::span<const uint8_t> frame) {
  send_all(frame.data(), frame.size());
}

TcpStream::Received TcpStream::recv_msg() {
  Received out{Received::Status::kEof, std::nullopt, {}, 0};
  uint8_t header[kHeaderLen];
  if (!recv_exact(header, kHeaderLen, true)) return out;
  out.frame_bytes = kHeaderLen;

  // A corrupted magic or an oversized length leaves no way to resync the
  // stream, so those are reported as bad frames and the caller closes.
  bool magic_ok = std::memcmp(header, kMagic, 4) == 0;
  uint16_t version = static_cast<uint16_t>(header[4]) << 8 | header[5];
  uint8_t kind = header[6];
  uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = len << 8 | header[7 + i];

  if (!magic_ok || len > kMaxFrameLen) {
    out.status = Received::Status::kBadFrame;
    out.error = ErrCode::kBadFrame;
    return out;
  }

  Bytes payload(len);
  if (len > 0) recv_exact(payload.data(), len, false);
  uint8_t crc_buf[4];
  recv_exact(crc_buf, 4, false);
  out.frame_bytes += len + 4;

  uint32_t got_crc = 0;
  for (int i = 0; i < 4; ++i) got_crc = got_crc << 8 | crc_buf[i];
  ByteWriter check;
  check.raw(header + 4, kHeaderLen - 4);
  check.raw(payload);
  if (crc32(check.data()) != got_crc) {
    out.status = Received::Status::kBadFrame;
    out.error = ErrCode::kBadCrc;
    return out;
  }
  if (version != kWireVersion) {
    out.status = Received::Status::kBadFrame;
    out.error = ErrCode::kBadFrame;
    return out;
  }
  if (kind < 1 || kind > 7) {
    out.status = Received::Status::kBadFrame;
    out.error = ErrCode::kUnknownKind;
    return out;
  }
  out.status = Received::Status::kOk;
  out.msg = WireMessage{static_cast<MsgKind>(kind), std::move(payload)};
  return out;
}

TcpStream tcp_connect(const std::string& host, uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string port_str = std::to_string(port);
  int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res);
  if (rc != 0) throw Error(std::string("resolve failed: ") + gai_strerror(rc));
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw Error("connect failed to " + host + ":" + port_str);
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return TcpStream(fd);
}

TcpListener TcpListener::bind_loopback(uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw Error("socket failed");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    throw Error(std::string("bind failed: ") + std::strerror(errno));
  }
  if (::listen(fd, 64) != 0) {
    ::close(fd);
    throw Error("listen failed");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return TcpListener(fd, ntohs(addr.sin_port));
}

TcpListener::TcpListener(TcpListener&& o) noexcept : fd_(o.fd_), port_(o.port_) {
  o.fd_ = -1;
}

TcpListener::~TcpListener() { close(); }

void TcpListener::close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

std::optional<TcpStream> TcpListener::accept() {
  if (fd_ < 0) return std::nullopt;
  int conn = ::accept(fd_, nullptr, nullptr);
  if (conn < 0) return std::nullopt;
  int one = 1;
  ::setsockopt(conn, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return TcpStream(conn);
}

}  // namespace p3
