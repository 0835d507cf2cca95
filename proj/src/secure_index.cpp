#include "p3/secure_index.hpp"

#include "p3/error.hpp"

namespace p3 {

namespace {
constexpr char kMagic[5] = "P3IX";
constexpr uint16_t kVersion = 1;
}  // namespace

Bytes SecureIndex::serialize(const CurveGroup& group) const {
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u16(kVersion);
  w.raw(params_digest.data(), params_digest.size());
  w.u16(d);
  w.u32(eta);
  w.u64(lists.size());
  for (const auto& list : lists) {
    list.keyword_id.serialize(w);
    if (list.entries.size() != eta) throw Error("list length differs from eta");
    for (const auto& entry : list.entries) {
      w.raw(entry.enc_doc_id.data(), entry.enc_doc_id.size());
      w.u32(static_cast<uint32_t>(entry.enc_locations.size()));
      for (const auto& loc : entry.enc_locations) group.serialize(loc, w);
    }
  }
  return w.take();
}

SecureIndex SecureIndex::parse(std::span<const uint8_t> buf, const CurveGroup& group) {
  ByteReader r(buf);
  r.expect_magic(kMagic);
  if (r.u16() != kVersion) throw ParseError("unsupported index version");
  SecureIndex index;
  auto digest = r.raw(32);
  std::copy(digest.begin(), digest.end(), index.params_digest.begin());
  index.d = r.u16();
  index.eta = r.u32();
  if (index.eta == 0) throw ParseError("eta must be positive");
  uint64_t count = r.u64();
  index.lists.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    SecureInvertedList list;
    list.keyword_id = IndexKeywordId::parse(r);
    if (list.keyword_id.part_a.size() != index.d)
      throw ParseError("keyword id dimension differs from index header");
    list.entries.resize(index.eta);
    for (auto& entry : list.entries) {
      auto id = r.raw(8);
      std::copy(id.begin(), id.end(), entry.enc_doc_id.begin());
      uint32_t nloc = r.u32();
      entry.enc_locations.reserve(nloc);
      for (uint32_t k = 0; k < nloc; ++k)
        entry.enc_locations.push_back(group.parse_element(r));
    }
    index.lists.push_back(std::move(list));
  }
  if (!r.done()) throw ParseError("trailing bytes after index");
  return index;
}

size_t secure_entry_wire_size(const CurveGroup& group, size_t location_count) {
  size_t element_size = 1 + 2 * (4 + group.params().fe_width());
  return 8 + 4 + location_count * element_size;
}

}  // namespace p3
