#include "p3/master_key.hpp"

#include <fstream>

#include "p3/error.hpp"
#include "p3/zp.hpp"

namespace p3 {

namespace {
constexpr char kMagic[5] = "P3MK";
constexpr uint16_t kVersion = 1;
constexpr size_t kSymKeyLen = 32;
}  // namespace

PublicParams MasterKey::public_params() const {
  return PublicParams{bgn.pk.params, knn.d, zp::kModulus};
}

Bytes MasterKey::serialize() const {
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u16(kVersion);
  bgn.pk.serialize(w);
  CurveGroup group(bgn.pk.params);
  bgn.sk.serialize(w, group);
  knn.serialize(w);
  w.blob(prp_key);
  w.blob(doc_key);
  return w.take();
}

MasterKey MasterKey::parse(std::span<const uint8_t> buf) {
  ByteReader r(buf);
  r.expect_magic(kMagic);
  if (r.u16() != kVersion) throw ParseError("unsupported master key version");
  MasterKey mk;
  mk.bgn.pk = BgnPublicKey::parse(r);
  CurveGroup group(mk.bgn.pk.params);
  mk.bgn.sk = BgnSecretKey::parse(r, group);
  mk.knn = KnnSecrets::parse(r);
  auto prp = r.blob();
  mk.prp_key.assign(prp.begin(), prp.end());
  auto dk = r.blob();
  mk.doc_key.assign(dk.begin(), dk.end());
  if (mk.prp_key.size() != kSymKeyLen || mk.doc_key.size() != kSymKeyLen)
    throw ParseError("bad symmetric key length");
  if (!r.done()) throw ParseError("trailing bytes after master key");
  return mk;
}

void MasterKey::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

MasterKey MasterKey::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

MasterKey master_keygen(unsigned tau, uint16_t d, Rng& rng,
                        const MasterKeygenOptions& opts) {
  MasterKey mk;
  mk.bgn = bgn_keygen(tau, rng, opts.bgn);
  mk.knn = KnnSecrets::generate(d, rng);
  mk.prp_key = rng.bytes(kSymKeyLen);
  mk.doc_key = rng.bytes(kSymKeyLen);
  return mk;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const uint8_t> data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (!f) throw Error("short write to " + path.string());
}

}  // namespace p3
