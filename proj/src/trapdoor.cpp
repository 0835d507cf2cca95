#include "p3/trapdoor.hpp"

#include "p3/error.hpp"
#include "p3/tokenizer.hpp"

namespace p3 {

namespace {
constexpr char kMagic[5] = "P3TD";
constexpr uint16_t kVersion = 1;
}  // namespace

PhraseQuery PhraseQuery::from_phrase(std::string_view phrase) {
  return {tokenize_words(phrase)};
}

Bytes Trapdoor::serialize(const CurveGroup& group) const {
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u16(kVersion);
  w.u16(static_cast<uint16_t>(keyword_ids.size()));
  w.u8(conjunctive_only ? 1 : 0);
  for (const auto& id : keyword_ids) id.serialize(w);
  group.serialize(adjacency_ct, w);
  group.serialize(dispersal, w);
  return w.take();
}

Trapdoor Trapdoor::parse(std::span<const uint8_t> buf, const CurveGroup& group) {
  ByteReader r(buf);
  r.expect_magic(kMagic);
  if (r.u16() != kVersion) throw ParseError("unsupported trapdoor version");
  uint16_t count = r.u16();
  if (count == 0) throw ParseError("empty trapdoor");
  uint8_t flag = r.u8();
  if (flag > 1) throw ParseError("bad conjunctive flag");
  Trapdoor t;
  t.conjunctive_only = flag == 1;
  t.keyword_ids.reserve(count);
  for (uint16_t i = 0; i < count; ++i)
    t.keyword_ids.push_back(TrapdoorKeywordId::parse(r));
  t.adjacency_ct = group.parse_element(r);
  t.dispersal = group.parse_element(r);
  if (t.dispersal.infinity) throw ParseError("dispersal factor is the identity");
  if (!r.done()) throw ParseError("trailing bytes after trapdoor");
  return t;
}

}  // namespace p3
