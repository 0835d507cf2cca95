#pragma once

#include <array>

#include "p3/group.hpp"

namespace p3 {

// Everything the cloud server is given: the group description (not g or h),
// the keyword-vector dimension, and the match-field modulus. The digest of
// this blob binds indexes and trapdoors to one parameter set.
struct PublicParams {
  GroupParams group;
  uint16_t knn_dim = 0;
  uint64_t match_modulus = 0;

  Bytes serialize() const;
  static PublicParams parse(std::span<const uint8_t> buf);
  std::array<uint8_t, 32> digest() const;
  bool operator==(const PublicParams&) const = default;
};

}  // namespace p3
