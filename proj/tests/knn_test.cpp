#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "p3/error.hpp"
#include "p3/knn_owner.hpp"

using namespace p3;

namespace {

const KnnSecrets& secrets() {
  static KnnSecrets s = [] {
    Rng rng(777);
    return KnnSecrets::generate(8, rng);
  }();
  return s;
}

std::string random_word(Rng& rng) {
  static const char* alphabet = "abcdefghijklmnopqrstuvwxyz";
  std::string w;
  size_t len = 3 + rng.below(8);
  for (size_t i = 0; i < len; ++i) w.push_back(alphabet[rng.below(26)]);
  return w;
}

}  // namespace

TEST_CASE("prf is deterministic and key-separated") {
  Rng rng(1);
  auto k1 = rng.bytes(32), k2 = rng.bytes(32);
  CHECK(prf_eval(k1, "heart") == prf_eval(k1, "heart"));
  CHECK(prf_eval(k1, "heart") != prf_eval(k1, "attack"));
  CHECK(prf_eval(k1, "heart") >= 1);
  CHECK(prf_eval(k1, "heart") < zp::kModulus);
  CHECK(prf_eval(k1, "heart") != prf_eval(k2, "heart"));

  int collisions = 0;
  for (int i = 0; i < 100; ++i) {
    auto ka = rng.bytes(32), kb = rng.bytes(32);
    if (prf_eval(ka, "w") == prf_eval(kb, "w")) ++collisions;
  }
  CHECK(collisions == 0);
}

TEST_CASE("matrix generation yields a working inverse") {
  Rng rng(2);
  auto [m, inv] = ZpMatrix::random_invertible(8, rng);
  ZpVector v(8);
  for (auto& x : v) x = zp::random_element(rng);
  CHECK(inv.mul_vec(m.mul_vec(v)) == v);
}

TEST_CASE("split correctness per the indicator string") {
  Rng rng(3);
  const auto& s = secrets();
  // Reconstruct the splits by inverting the matrix encryption:
  // part_a = M1^T·B^a, so B^a = (M1^{-1})^T·part_a.
  auto id = enc_keyword_for_index(s, "word", rng);
  ZpVector ba = s.m1_inv.transpose_mul_vec(id.part_a);
  ZpVector bb = s.m2_inv.transpose_mul_vec(id.part_b);
  ZpVector b = knn_power_vector(prf_eval(s.prf_key, "word"), s.d);
  for (size_t i = 0; i < s.d; ++i) {
    if (s.split_bits[i] == 1)
      CHECK(zp::add(ba[i], bb[i]) == b[i]);
    else {
      CHECK(ba[i] == b[i]);
      CHECK(bb[i] == b[i]);
    }
  }
}

TEST_CASE("index and trapdoor ids match on equal keywords") {
  Rng rng(4);
  const auto& s = secrets();
  auto z = enc_keyword_for_index(s, "heart", rng);
  auto y = enc_keyword_for_trapdoor(s, "heart", rng);
  CHECK(knn_match(y, z));

  auto z2 = enc_keyword_for_index(s, "attack", rng);
  CHECK_FALSE(knn_match(y, z2));
}

TEST_CASE("repeated encryptions of one keyword differ") {
  Rng rng(5);
  const auto& s = secrets();
  auto z1 = enc_keyword_for_index(s, "heart", rng);
  auto z2 = enc_keyword_for_index(s, "heart", rng);
  CHECK(z1.part_a != z2.part_a);

  auto y = enc_keyword_for_trapdoor(s, "heart", rng);
  CHECK(knn_match(y, z1));
  CHECK(knn_match(y, z2));
}

TEST_CASE("degree-2 polynomial coefficients") {
  // f(x) = (x-t)(x-u) has coefficients (tu, -(t+u), 1)
  uint64_t t = 12345, u = 67890;
  auto coeffs = knn_poly_coeffs({t, u});
  REQUIRE(coeffs.size() == 3);
  CHECK(coeffs[0] == zp::mul(t, u));
  CHECK(coeffs[1] == zp::neg(zp::add(t, u)));
  CHECK(coeffs[2] == 1);
  CHECK(zp_dot(coeffs, knn_power_vector(t, 3)) == 0);
  CHECK(zp_dot(coeffs, knn_power_vector(u, 3)) == 0);
  CHECK(zp_dot(coeffs, knn_power_vector(t + 1, 3)) != 0);
}

TEST_CASE("match equals the matrix-free inner product") {
  Rng rng(6);
  const auto& s = secrets();
  for (int i = 0; i < 200; ++i) {
    std::string w = random_word(rng);
    std::vector<std::string> dummies;
    std::vector<uint64_t> roots{prf_eval(s.prf_key, w)};
    for (size_t k = 0; k + 2 < s.d; ++k) {
      dummies.push_back("#dummy" + std::to_string(i) + "_" + std::to_string(k));
      roots.push_back(prf_eval(s.prf_key, dummies.back()));
    }
    auto y = enc_keyword_for_trapdoor(s, w, dummies, rng);
    ZpVector coeffs = knn_poly_coeffs(roots);

    std::string other = random_word(rng);
    for (const std::string& target : {w, other}) {
      auto z = enc_keyword_for_index(s, target, rng);
      ZpVector powers = knn_power_vector(prf_eval(s.prf_key, target), s.d);
      CHECK(knn_match_value(y, z) == zp_dot(coeffs, powers));
    }
  }
}

TEST_CASE("oracle equivalence over random keyword pairs") {
  Rng rng(7);
  const auto& s = secrets();

  // completeness: equal keywords always match
  for (int i = 0; i < 1000; ++i) {
    std::string w = random_word(rng);
    auto y = enc_keyword_for_trapdoor(s, w, rng);
    CHECK(knn_match(y, enc_keyword_for_index(s, w, rng)));
  }

  // soundness: mismatched keywords do not (failure bound (d-1)/P per pair)
  int false_matches = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string w1 = random_word(rng);
    std::string w2 = random_word(rng);
    if (w1 == w2) continue;
    auto y = enc_keyword_for_trapdoor(s, w1, rng);
    if (knn_match(y, enc_keyword_for_index(s, w2, rng))) ++false_matches;
  }
  CHECK(false_matches == 0);
}

TEST_CASE("trapdoor id matches its keyword and rejects ten others") {
  Rng rng(8);
  const auto& s = secrets();
  for (int i = 0; i < 100; ++i) {
    std::string w = random_word(rng);
    auto y = enc_keyword_for_trapdoor(s, w, rng);
    CHECK(knn_match(y, enc_keyword_for_index(s, w, rng)));
    for (int k = 0; k < 10; ++k) {
      std::string other = random_word(rng) + std::to_string(k);
      if (other == w) continue;
      CHECK_FALSE(knn_match(y, enc_keyword_for_index(s, other, rng)));
    }
  }
}

TEST_CASE("tampering a coordinate breaks the match") {
  Rng rng(9);
  const auto& s = secrets();
  int surviving = 0;
  for (int i = 0; i < 200; ++i) {
    std::string w = random_word(rng);
    auto y = enc_keyword_for_trapdoor(s, w, rng);
    auto z = enc_keyword_for_index(s, w, rng);
    size_t coord = rng.below(s.d);
    uint64_t delta = 1 + rng.below(zp::kModulus - 1);
    z.part_a[coord] = zp::add(z.part_a[coord], delta);
    if (knn_match(y, z)) ++surviving;
  }
  CHECK(surviving == 0);
}

TEST_CASE("trapdoor unlinkability: no duplicate identifiers in 100 draws") {
  Rng rng(10);
  const auto& s = secrets();
  std::set<Bytes> seen;
  for (int i = 0; i < 100; ++i)
    seen.insert(enc_keyword_for_trapdoor(s, "heart", rng).bytes());
  CHECK(seen.size() == 100);
}

TEST_CASE("keyword id serialization and dimension checks") {
  Rng rng(11);
  const auto& s = secrets();
  auto z = enc_keyword_for_index(s, "roundtrip", rng);
  Bytes b = z.bytes();
  ByteReader r(b);
  CHECK(IndexKeywordId::parse(r) == z);

  KnnSecrets s3 = KnnSecrets::generate(3, rng);
  auto y3 = enc_keyword_for_trapdoor(s3, "roundtrip", rng);
  CHECK_THROWS_AS(knn_match(y3, z), Error);
}

TEST_CASE("secrets serialization round trips") {
  Rng rng(12);
  auto s = KnnSecrets::generate(5, rng);
  ByteWriter w;
  s.serialize(w);
  Bytes b = w.take();
  ByteReader r(b);
  auto s2 = KnnSecrets::parse(r);
  CHECK(s2.d == s.d);
  CHECK(s2.split_bits == s.split_bits);
  CHECK(s2.m1 == s.m1);
  CHECK(s2.m2 == s.m2);
  CHECK(s2.prf_key == s.prf_key);
  // inverses recomputed on parse
  auto y = enc_keyword_for_trapdoor(s2, "kw", rng);
  CHECK(knn_match(y, enc_keyword_for_index(s, "kw", rng)));
}
