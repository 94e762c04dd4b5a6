#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tmrbe/bitset.hpp"
#include "tmrbe/literals.hpp"
#include "tmrbe/rng.hpp"

namespace tmrbe {

/// Tsetlin automaton state. Holds 2N-1 for N up to 2^15.
using State = std::uint16_t;

inline constexpr std::size_t kMaxHalfStates = std::size_t{1} << 15;

/// Learn mode treats an empty clause as firing so fresh clauses get feedback;
/// Predict mode treats it as silent so it casts no vote.
enum class EvaluationMode { Learn, Predict };

/// n clauses x 2m literals of automaton states in [0, 2N-1]. A literal is
/// included iff its state >= N. An include bitmask is kept in sync with the
/// states so clause evaluation is a word-wise AND.
class ClauseBank {
 public:
  ClauseBank() = default;
  ClauseBank(std::size_t clauses, std::size_t features, std::size_t half_states, State initial);

  std::size_t clauses() const { return clauses_; }
  std::size_t features() const { return features_; }
  std::size_t literals() const { return 2 * features_; }
  std::size_t half_states() const { return half_states_; }
  State max_state() const { return static_cast<State>(2 * half_states_ - 1); }

  State state(std::size_t clause, std::size_t literal) const { return states_[clause * literals() + literal]; }
  std::span<const State> clause_states(std::size_t clause) const {
    return {states_.data() + clause * literals(), literals()};
  }
  void set_state(std::size_t clause, std::size_t literal, State value);

  bool included(std::size_t clause, std::size_t literal) const {
    return (include_[clause * words_ + literal / 64] >> (literal % 64)) & 1U;
  }
  std::span<const Bitset::Word> include_words(std::size_t clause) const {
    return {include_.data() + clause * words_, words_};
  }
  std::size_t included_count(std::size_t clause) const;

  /// Saturating single-step moves. They keep the include mask in sync.
  void increment(std::size_t clause, std::size_t literal);
  void decrement(std::size_t clause, std::size_t literal);

  bool operator==(const ClauseBank&) const = default;

 private:
  std::size_t clauses_ = 0;
  std::size_t features_ = 0;
  std::size_t half_states_ = 0;
  std::size_t words_ = 0;
  std::vector<State> states_;
  std::vector<Bitset::Word> include_;
};

/// All states start at `initial_state`, N-1 by default (just below inclusion).
/// The seed is reserved for stochastic init variants and is currently unused.
ClauseBank init_bank(std::size_t clauses, std::size_t features, std::size_t half_states, std::uint64_t seed,
                     std::optional<State> initial_state = std::nullopt);

bool clause_output(const ClauseBank& bank, std::size_t clause, const LiteralVector& x, EvaluationMode mode);

std::vector<std::size_t> included_literals(const ClauseBank& bank, std::size_t clause);

/// Memorization / forgetting. If the clause fires in Learn mode, true literals
/// are incremented with probability (s-1)/s (1 when boosted) and false literals
/// decremented with probability 1/s. Otherwise every literal is decremented
/// with probability 1/s.
void type_i_feedback(ClauseBank& bank, std::size_t clause, const LiteralVector& x, double s,
                     bool boost_true_positive, Rng& rng);

/// Invalidation. If the clause fires in Learn mode, every false literal that is
/// currently excluded moves one step toward inclusion.
void type_ii_feedback(ClauseBank& bank, std::size_t clause, const LiteralVector& x);

/// Bernoulli(p) mask over `bits` positions, drawn by geometric skipping.
/// Exposed for testing.
Bitset bernoulli_mask(Rng& rng, double p, std::size_t bits);

}  // namespace tmrbe
