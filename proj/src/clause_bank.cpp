#include "tmrbe/clause_bank.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tmrbe/errors.hpp"

namespace tmrbe {

namespace {

void check_clause(const ClauseBank& bank, std::size_t clause) {
  if (clause >= bank.clauses()) {
    throw std::out_of_range("clause id " + std::to_string(clause) + " out of range (n=" +
                            std::to_string(bank.clauses()) + ")");
  }
}

void check_input(const ClauseBank& bank, const LiteralVector& x) {
  if (x.features() != bank.features() || x.size() != bank.literals()) {
    throw ConfigError("literal vector has m=" + std::to_string(x.features()) + " but bank has m=" +
                      std::to_string(bank.features()));
  }
}

bool fires(const ClauseBank& bank, std::size_t clause, const LiteralVector& x, EvaluationMode mode) {
  const auto inc = bank.include_words(clause);
  const auto xs = x.bits().words();
  bool any_included = false;
  for (std::size_t w = 0; w < inc.size(); ++w) {
    if ((inc[w] & ~xs[w]) != 0) return false;
    any_included |= inc[w] != 0;
  }
  return mode == EvaluationMode::Learn || any_included;
}

}  // namespace

ClauseBank::ClauseBank(std::size_t clauses, std::size_t features, std::size_t half_states, State initial)
    : clauses_(clauses),
      features_(features),
      half_states_(half_states),
      words_(Bitset::word_count(2 * features)),
      states_(clauses * 2 * features, initial),
      include_(clauses * words_, 0) {
  if (initial >= half_states) {
    for (std::size_t j = 0; j < clauses; ++j) {
      for (std::size_t k = 0; k < literals(); ++k) include_[j * words_ + k / 64] |= Bitset::Word{1} << (k % 64);
    }
  }
}

void ClauseBank::set_state(std::size_t clause, std::size_t literal, State value) {
  if (value > max_state()) throw std::out_of_range("state " + std::to_string(value) + " exceeds 2N-1");
  states_[clause * literals() + literal] = value;
  auto& word = include_[clause * words_ + literal / 64];
  const Bitset::Word bit = Bitset::Word{1} << (literal % 64);
  if (value >= half_states_) {
    word |= bit;
  } else {
    word &= ~bit;
  }
}

std::size_t ClauseBank::included_count(std::size_t clause) const {
  std::size_t c = 0;
  for (auto w : include_words(clause)) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

void ClauseBank::increment(std::size_t clause, std::size_t literal) {
  State& st = states_[clause * literals() + literal];
  if (st == max_state()) return;
  ++st;
  if (st == half_states_) include_[clause * words_ + literal / 64] |= Bitset::Word{1} << (literal % 64);
}

void ClauseBank::decrement(std::size_t clause, std::size_t literal) {
  State& st = states_[clause * literals() + literal];
  if (st == 0) return;
  --st;
  if (st + 1U == half_states_) include_[clause * words_ + literal / 64] &= ~(Bitset::Word{1} << (literal % 64));
}

ClauseBank init_bank(std::size_t clauses, std::size_t features, std::size_t half_states, std::uint64_t /*seed*/,
                     std::optional<State> initial_state) {
  require(clauses >= 1, "init_bank: n must be >= 1");
  require(features >= 1, "init_bank: m must be >= 1");
  require(half_states >= 2, "init_bank: N must be >= 2");
  require(half_states <= kMaxHalfStates, "init_bank: N must be <= 32768");
  const State initial = initial_state.value_or(static_cast<State>(half_states - 1));
  require(initial <= 2 * half_states - 1, "init_bank: initial state must be in [0, 2N-1]");
  return ClauseBank(clauses, features, half_states, initial);
}

bool clause_output(const ClauseBank& bank, std::size_t clause, const LiteralVector& x, EvaluationMode mode) {
  check_clause(bank, clause);
  check_input(bank, x);
  return fires(bank, clause, x, mode);
}

std::vector<std::size_t> included_literals(const ClauseBank& bank, std::size_t clause) {
  check_clause(bank, clause);
  std::vector<std::size_t> out;
  const auto inc = bank.include_words(clause);
  for (std::size_t w = 0; w < inc.size(); ++w) {
    for (auto bits = inc[w]; bits != 0; bits &= bits - 1) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
    }
  }
  return out;
}

Bitset bernoulli_mask(Rng& rng, double p, std::size_t bits) {
  Bitset mask(bits);
  if (p <= 0.0 || bits == 0) return mask;
  if (p >= 1.0) {
    for (auto& w : mask.words()) w = ~Bitset::Word{0};
    mask.words().back() &= mask.tail_mask();
    return mask;
  }
  // Dense masks are drawn as the complement of a sparse one.
  const bool invert = p > 0.5;
  const double q = invert ? 1.0 - p : p;
  const double log_miss = std::log1p(-q);
  std::size_t pos = 0;
  while (true) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double gap = std::floor(std::log(u) / log_miss);
    if (gap >= static_cast<double>(bits - pos)) break;
    pos += static_cast<std::size_t>(gap);
    mask.set(pos);
    if (++pos >= bits) break;
  }
  if (invert) {
    for (auto& w : mask.words()) w = ~w;
    mask.words().back() &= mask.tail_mask();
  }
  return mask;
}

void type_i_feedback(ClauseBank& bank, std::size_t clause, const LiteralVector& x, double s,
                     bool boost_true_positive, Rng& rng) {
  if (!(s >= 1.0)) throw ConfigError("type_i_feedback: s must be >= 1, got " + std::to_string(s));
  check_clause(bank, clause);
  check_input(bank, x);

  const std::size_t lits = bank.literals();
  const auto xs = x.bits().words();
  if (fires(bank, clause, x, EvaluationMode::Learn)) {
    Bitset inc = bernoulli_mask(rng, boost_true_positive ? 1.0 : (s - 1.0) / s, lits);
    Bitset dec = bernoulli_mask(rng, 1.0 / s, lits);
    auto iw = inc.words();
    auto dw = dec.words();
    for (std::size_t w = 0; w < iw.size(); ++w) {
      iw[w] &= xs[w];
      dw[w] &= ~xs[w];
    }
    inc.for_each_set([&](std::size_t k) { bank.increment(clause, k); });
    dec.for_each_set([&](std::size_t k) { bank.decrement(clause, k); });
  } else {
    bernoulli_mask(rng, 1.0 / s, lits).for_each_set([&](std::size_t k) { bank.decrement(clause, k); });
  }
}

void type_ii_feedback(ClauseBank& bank, std::size_t clause, const LiteralVector& x) {
  check_clause(bank, clause);
  check_input(bank, x);
  if (!fires(bank, clause, x, EvaluationMode::Learn)) return;

  const auto inc = bank.include_words(clause);
  const auto xs = x.bits().words();
  const Bitset::Word tail = x.bits().tail_mask();
  for (std::size_t w = 0; w < inc.size(); ++w) {
    Bitset::Word cand = ~xs[w] & ~inc[w];
    if (w + 1 == inc.size()) cand &= tail;
    for (; cand != 0; cand &= cand - 1) {
      bank.increment(clause, w * 64 + static_cast<std::size_t>(std::countr_zero(cand)));
    }
  }
}

}  // namespace tmrbe
