#pragma once

#include <cstddef>

#include "tmrbe/bitset.hpp"

namespace tmrbe {

/// Input X over 2m literals: bit i is feature i, bit m+i is its negation.
class LiteralVector {
 public:
  LiteralVector() = default;

  std::size_t features() const { return features_; }
  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t literal) const { return bits_.test(literal); }
  const Bitset& bits() const { return bits_; }

  /// Negation consistency: bits[m+i] == !bits[i] for all i.
  bool consistent() const;

  bool operator==(const LiteralVector&) const = default;

 private:
  friend LiteralVector encode_input(const Bitset& presence);

  std::size_t features_ = 0;
  Bitset bits_;
};

/// Builds X from a feature-presence vector of length m >= 1.
LiteralVector encode_input(const Bitset& presence);

}  // namespace tmrbe
