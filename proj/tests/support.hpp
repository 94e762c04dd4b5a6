#pragma once

#include <cstdint>
#include <vector>

#include "tmrbe/bitset.hpp"
#include "tmrbe/clause_bank.hpp"
#include "tmrbe/literals.hpp"
#include "tmrbe/rng.hpp"

namespace tmrbe::testing {

inline Bitset random_presence(Rng& rng, std::size_t m, double density = 0.5) {
  Bitset b(m);
  for (std::size_t i = 0; i < m; ++i) b.set(i, rng.bernoulli(density));
  return b;
}

inline Bitset presence_from_index(std::uint64_t code, std::size_t m) {
  Bitset b(m);
  for (std::size_t i = 0; i < m; ++i) b.set(i, (code >> i) & 1U);
  return b;
}

/// Bank with every state drawn uniformly from [0, 2N-1].
inline ClauseBank random_bank(Rng& rng, std::size_t n, std::size_t m, std::size_t N) {
  ClauseBank bank = init_bank(n, m, N, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < 2 * m; ++k) bank.set_state(j, k, static_cast<State>(rng.below(2 * N)));
  }
  return bank;
}

/// Bank whose states sit one step either side of the boundary, so that
/// clauses include a sparse random subset and fire often enough to matter.
inline ClauseBank sparse_bank(Rng& rng, std::size_t n, std::size_t m, std::size_t N, double include_p) {
  ClauseBank bank = init_bank(n, m, N, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < 2 * m; ++k) {
      bank.set_state(j, k, static_cast<State>(rng.bernoulli(include_p) ? N : N - 1));
    }
  }
  return bank;
}

}  // namespace tmrbe::testing
