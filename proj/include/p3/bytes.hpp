#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "p3/error.hpp"

namespace p3 {

using Bytes = std::vector<uint8_t>;

// Append-only big-endian serializer. All on-disk and on-wire integers in
// this project are big-endian.
class ByteWriter {
 public:
  Bytes take() { return std::move(buf_); }
  const Bytes& data() const { return buf_; }
  size_t size() const { return buf_.size(); }

  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) {
    buf_.push_back(static_cast<uint8_t>(v >> 8));
    buf_.push_back(static_cast<uint8_t>(v));
  }
  void u32(uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<uint8_t>(v >> s));
  }
  void u64(uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) buf_.push_back(static_cast<uint8_t>(v >> s));
  }
  void raw(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void raw(const void* p, size_t len) {
    const auto* b = static_cast<const uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + len);
  }
  // 4-byte length prefix followed by the bytes.
  void blob(std::span<const uint8_t> b) {
    u32(static_cast<uint32_t>(b.size()));
    raw(b);
  }
  void str(std::string_view s) {
    u32(static_cast<uint32_t>(s.size()));
    raw(s.data(), s.size());
  }

 private:
  Bytes buf_;
};

// Bounds-checked big-endian reader over a borrowed buffer.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> buf) : buf_(buf) {}

  size_t remaining() const { return buf_.size() - pos_; }
  bool done() const { return pos_ == buf_.size(); }

  uint8_t u8() { return take(1)[0]; }
  uint16_t u16() {
    auto b = take(2);
    return static_cast<uint16_t>(b[0]) << 8 | b[1];
  }
  uint32_t u32() {
    auto b = take(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | b[i];
    return v;
  }
  uint64_t u64() {
    auto b = take(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | b[i];
    return v;
  }
  std::span<const uint8_t> raw(size_t len) { return take(len); }
  std::span<const uint8_t> blob() {
    uint32_t len = u32();
    return take(len);
  }
  std::string str() {
    auto b = blob();
    return std::string(reinterpret_cast<const char*>(b.data()), b.size());
  }
  void expect_magic(const char (&magic)[5]) {
    auto b = take(4);
    if (std::memcmp(b.data(), magic, 4) != 0) throw ParseError("bad magic");
  }

 private:
  std::span<const uint8_t> take(size_t len) {
    if (remaining() < len) throw ParseError("truncated buffer");
    auto out = buf_.subspan(pos_, len);
    pos_ += len;
    return out;
  }

  std::span<const uint8_t> buf_;
  size_t pos_ = 0;
};

inline std::string to_hex(std::span<const uint8_t> b) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (uint8_t c : b) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

}  // namespace p3
