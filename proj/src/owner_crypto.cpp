#include "p3/owner_crypto.hpp"

#include <openssl/evp.h>

#include <memory>

#include "p3/error.hpp"
#include "p3/hash.hpp"

namespace p3 {

FeistelPrp::FeistelPrp(Bytes key) : key_(std::move(key)) {
  if (key_.size() < 16) throw Error("PRP key too short");
}

uint32_t FeistelPrp::round(unsigned idx, uint32_t half) const {
  ByteWriter msg;
  msg.u8(static_cast<uint8_t>(idx));
  msg.u32(half);
  auto mac = hmac_sha256(key_, msg.data());
  return static_cast<uint32_t>(mac[0]) << 24 | static_cast<uint32_t>(mac[1]) << 16 |
         static_cast<uint32_t>(mac[2]) << 8 | mac[3];
}

uint64_t FeistelPrp::encrypt(uint64_t v) const {
  uint32_t left = static_cast<uint32_t>(v >> 32);
  uint32_t right = static_cast<uint32_t>(v);
  for (unsigned i = 0; i < 4; ++i) {
    uint32_t next = left ^ round(i, right);
    left = right;
    right = next;
  }
  return static_cast<uint64_t>(left) << 32 | right;
}

uint64_t FeistelPrp::decrypt(uint64_t v) const {
  uint32_t left = static_cast<uint32_t>(v >> 32);
  uint32_t right = static_cast<uint32_t>(v);
  for (unsigned i = 4; i-- > 0;) {
    uint32_t prev = right ^ round(i, left);
    right = left;
    left = prev;
  }
  return static_cast<uint64_t>(left) << 32 | right;
}

namespace {

constexpr size_t kNonceLen = 12;
constexpr size_t kTagLen = 16;

struct CipherCtx {
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  ~CipherCtx() { EVP_CIPHER_CTX_free(ctx); }
};

}  // namespace

Bytes aead_seal(std::span<const uint8_t> key, std::span<const uint8_t> plaintext,
                Rng& rng) {
  if (key.size() != 32) throw Error("document key must be 32 bytes");
  Bytes out(kNonceLen + plaintext.size() + kTagLen);
  rng.fill(std::span<uint8_t>(out.data(), kNonceLen));

  CipherCtx c;
  if (!c.ctx) throw Error("cipher allocation failed");
  if (EVP_EncryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key.data(), out.data()) != 1)
    throw Error("AES-GCM init failed");
  int len = 0;
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(c.ctx, out.data() + kNonceLen, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1)
    throw Error("AES-GCM encrypt failed");
  int fin = 0;
  if (EVP_EncryptFinal_ex(c.ctx, out.data() + kNonceLen + len, &fin) != 1)
    throw Error("AES-GCM finalize failed");
  if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_GET_TAG, kTagLen,
                          out.data() + kNonceLen + plaintext.size()) != 1)
    throw Error("AES-GCM tag failed");
  return out;
}

Bytes aead_open(std::span<const uint8_t> key, std::span<const uint8_t> sealed) {
  if (key.size() != 32) throw Error("document key must be 32 bytes");
  if (sealed.size() < kNonceLen + kTagLen) throw Error("sealed blob too short");
  size_t ct_len = sealed.size() - kNonceLen - kTagLen;

  CipherCtx c;
  if (!c.ctx) throw Error("cipher allocation failed");
  if (EVP_DecryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key.data(), sealed.data()) != 1)
    throw Error("AES-GCM init failed");
  Bytes out(ct_len);
  int len = 0;
  if (ct_len > 0 &&
      EVP_DecryptUpdate(c.ctx, out.data(), &len, sealed.data() + kNonceLen,
                        static_cast<int>(ct_len)) != 1)
    throw Error("AES-GCM decrypt failed");
  Bytes tag(sealed.end() - kTagLen, sealed.end());
  if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_TAG, kTagLen, tag.data()) != 1)
    throw Error("AES-GCM tag set failed");
  int fin = 0;
  if (EVP_DecryptFinal_ex(c.ctx, out.data() + len, &fin) != 1)
    throw Error("document authentication failed");
  return out;
}

}  // namespace p3
