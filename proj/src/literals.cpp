#include "tmrbe/literals.hpp"

#include "tmrbe/errors.hpp"

namespace tmrbe {

LiteralVector encode_input(const Bitset& presence) {
  const std::size_t m = presence.size();
  require(m >= 1, "encode_input: presence vector must have length >= 1");

  LiteralVector x;
  x.features_ = m;
  x.bits_ = Bitset(2 * m);
  presence.for_each_set([&](std::size_t i) { x.bits_.set(i); });
  for (std::size_t i = 0; i < m; ++i) {
    if (!presence.test(i)) x.bits_.set(m + i);
  }
  return x;
}

bool LiteralVector::consistent() const {
  if (bits_.size() != 2 * features_) return false;
  for (std::size_t i = 0; i < features_; ++i) {
    if (bits_.test(i) == bits_.test(features_ + i)) return false;
  }
  return true;
}

}  // namespace tmrbe
