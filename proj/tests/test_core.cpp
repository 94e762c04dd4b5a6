#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "tmrbe/errors.hpp"

using namespace tmrbe;
using tmrbe::testing::presence_from_index;
using tmrbe::testing::random_bank;
using tmrbe::testing::random_presence;
using tmrbe::testing::sparse_bank;

namespace {

std::vector<int> bits_of(const LiteralVector& x) {
  std::vector<int> out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(x[i] ? 1 : 0);
  return out;
}

// Conjunction over the included literals, evaluated literal by literal from
// the raw presence vector rather than through the packed X.
bool brute_force_clause(const ClauseBank& bank, std::size_t j, const Bitset& presence, EvaluationMode mode) {
  const std::size_t m = bank.features();
  bool any = false;
  bool all = true;
  for (std::size_t k = 0; k < 2 * m; ++k) {
    if (bank.state(j, k) < bank.half_states()) continue;
    any = true;
    const bool value = k < m ? presence.test(k) : !presence.test(k - m);
    all = all && value;
  }
  if (!any) return mode == EvaluationMode::Learn;
  return all;
}

}  // namespace

TEST_SUITE("literals") {
  TEST_CASE("encode_input examples") {
    CHECK(bits_of(encode_input(Bitset{1, 0, 0})) == std::vector<int>{1, 0, 0, 0, 1, 1});
    CHECK(bits_of(encode_input(Bitset{0, 0})) == std::vector<int>{0, 0, 1, 1});
    CHECK(bits_of(encode_input(Bitset{1, 1, 0, 1})) == std::vector<int>{1, 1, 0, 1, 0, 0, 1, 0});
  }

  TEST_CASE("zero-length input is rejected") { CHECK_THROWS_AS(encode_input(Bitset(0)), ConfigError); }

  TEST_CASE("negation invariant over random inputs") {
    Rng rng(11);
    for (int trial = 0; trial < 10000; ++trial) {
      const std::size_t m = 1 + rng.below(200);
      const Bitset p = random_presence(rng, m, rng.uniform());
      const LiteralVector x = encode_input(p);
      REQUIRE(x.size() == 2 * m);
      REQUIRE(x.features() == m);
      REQUIRE(x.consistent());
      for (std::size_t i = 0; i < m; ++i) {
        REQUIRE(x[i] == p.test(i));
        REQUIRE(x[m + i] == !p.test(i));
      }
      // padding bits past 2m stay clear
      const auto words = x.bits().words();
      REQUIRE((words.back() & ~x.bits().tail_mask()) == 0);
    }
  }
}

TEST_SUITE("bank") {
  TEST_CASE("init_bank fills N-1") {
    const auto a = init_bank(1, 2, 4, 0);
    for (std::size_t k = 0; k < 4; ++k) CHECK(a.state(0, k) == 3);
    const auto b = init_bank(2, 1, 2, 0);
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) CHECK(b.state(j, k) == 1);
    }
    for (std::size_t j = 0; j < 2; ++j) CHECK(included_literals(b, j).empty());
  }

  TEST_CASE("init_bank honours an initial-state override") {
    const auto bank = init_bank(2, 3, 8, 0, State{8});
    CHECK(included_literals(bank, 1).size() == 6);
  }

  TEST_CASE("init_bank rejects bad sizes") {
    CHECK_THROWS_AS(init_bank(0, 2, 4, 0), ConfigError);
    CHECK_THROWS_AS(init_bank(1, 0, 4, 0), ConfigError);
    CHECK_THROWS_AS(init_bank(1, 2, 0, 0), ConfigError);
    CHECK_THROWS_AS(init_bank(1, 2, 1, 0), ConfigError);
    CHECK_THROWS_AS(init_bank(1, 2, kMaxHalfStates + 1, 0), ConfigError);
    CHECK_NOTHROW(init_bank(1, 2, kMaxHalfStates, 0));
  }

  TEST_CASE("included_literals thresholds at N") {
    const std::size_t N = 16;
    auto bank = init_bank(1, 2, N, 0);
    bank.set_state(0, 0, N);
    bank.set_state(0, 1, N - 1);
    bank.set_state(0, 2, 2 * N - 1);
    CHECK(included_literals(bank, 0) == std::vector<std::size_t>{0, 2});
    CHECK(bank.included_count(0) == 2);
  }

  TEST_CASE("included and forgotten sets partition the literals") {
    Rng rng(3);
    const auto bank = random_bank(rng, 20, 37, 64);
    for (std::size_t j = 0; j < bank.clauses(); ++j) {
      const auto inc = included_literals(bank, j);
      std::size_t forgotten = 0;
      for (std::size_t k = 0; k < bank.literals(); ++k) {
        const bool in = std::find(inc.begin(), inc.end(), k) != inc.end();
        CHECK(in == (bank.state(j, k) >= 64));
        CHECK(in == bank.included(j, k));
        forgotten += in ? 0 : 1;
      }
      CHECK(inc.size() + forgotten == bank.literals());
    }
  }

  TEST_CASE("increment and decrement saturate") {
    auto bank = init_bank(1, 1, 4, 0);
    bank.set_state(0, 0, 7);
    bank.increment(0, 0);
    CHECK(bank.state(0, 0) == 7);
    bank.set_state(0, 1, 0);
    bank.decrement(0, 1);
    CHECK(bank.state(0, 1) == 0);
    bank.decrement(0, 0);
    bank.decrement(0, 0);
    bank.decrement(0, 0);
    CHECK(bank.state(0, 0) == 4);
    CHECK(bank.included(0, 0));
    bank.decrement(0, 0);
    CHECK_FALSE(bank.included(0, 0));
  }

  TEST_CASE("set_state rejects values outside the range") {
    auto bank = init_bank(1, 1, 4, 0);
    CHECK_THROWS(bank.set_state(0, 0, 8));
  }
}

TEST_SUITE("clause_output") {
  TEST_CASE("examples") {
    const std::size_t N = 8;
    auto bank = init_bank(1, 3, N, 0);
    bank.set_state(0, 2, N);
    CHECK(clause_output(bank, 0, encode_input(Bitset{0, 0, 1}), EvaluationMode::Predict));
    CHECK_FALSE(clause_output(bank, 0, encode_input(Bitset{1, 1, 0}), EvaluationMode::Predict));

    const auto empty = init_bank(1, 3, N, 0);
    CHECK(clause_output(empty, 0, encode_input(Bitset{1, 0, 1}), EvaluationMode::Learn));
    CHECK_FALSE(clause_output(empty, 0, encode_input(Bitset{1, 0, 1}), EvaluationMode::Predict));

    auto both = init_bank(1, 3, N, 0);
    both.set_state(0, 0, N);
    both.set_state(0, 5, N);
    CHECK(clause_output(both, 0, encode_input(Bitset{1, 0, 0}), EvaluationMode::Predict));
  }

  TEST_CASE("dimension mismatch is rejected") {
    const auto bank = init_bank(2, 3, 8, 0);
    CHECK_THROWS(clause_output(bank, 0, encode_input(Bitset{1, 0}), EvaluationMode::Learn));
    CHECK_THROWS(clause_output(bank, 2, encode_input(Bitset{1, 0, 0}), EvaluationMode::Learn));
  }

  TEST_CASE("matches a brute-force conjunction on random banks") {
    Rng rng(2024);
    std::size_t checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t m = 1 + rng.below(8);
      const std::size_t N = 2 + rng.below(30);
      // mix dense random banks with sparse ones so both outcomes are common
      auto bank = trial % 2 == 0 ? random_bank(rng, 3, m, N) : sparse_bank(rng, 3, m, N, 0.15);
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
        const Bitset p = presence_from_index(code, m);
        const auto x = encode_input(p);
        for (std::size_t j = 0; j < bank.clauses(); ++j) {
          for (auto mode : {EvaluationMode::Learn, EvaluationMode::Predict}) {
            REQUIRE(clause_output(bank, j, x, mode) == brute_force_clause(bank, j, p, mode));
            ++checked;
          }
        }
      }
    }
    CHECK(checked > 10000);
  }

  TEST_CASE("wide inputs spanning several words") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t m = 60 + rng.below(140);
      auto bank = sparse_bank(rng, 4, m, 16, 0.01);
      const Bitset p = random_presence(rng, m, 0.5);
      const auto x = encode_input(p);
      for (std::size_t j = 0; j < 4; ++j) {
        REQUIRE(clause_output(bank, j, x, EvaluationMode::Learn) ==
                brute_force_clause(bank, j, p, EvaluationMode::Learn));
      }
    }
  }
}

TEST_SUITE("feedback") {
  TEST_CASE("type I at s=1 with boost is deterministic") {
    const std::size_t N = 8;
    auto bank = init_bank(1, 2, N, 0);
    Rng rng(1);
    const auto x = encode_input(Bitset{1, 0});  // X = 1,0,0,1
    type_i_feedback(bank, 0, x, 1.0, true, rng);
    CHECK(bank.state(0, 0) == N);
    CHECK(bank.state(0, 1) == N - 2);
    CHECK(bank.state(0, 2) == N - 2);
    CHECK(bank.state(0, 3) == N);
  }

  TEST_CASE("type I rejects s < 1") {
    auto bank = init_bank(1, 2, 8, 0);
    Rng rng(1);
    CHECK_THROWS_AS(type_i_feedback(bank, 0, encode_input(Bitset{1, 0}), 0.5, true, rng), ConfigError);
  }

  TEST_CASE("type I with a huge s almost never forgets") {
    const std::size_t N = 64;
    auto bank = init_bank(1, 2, N, 0);
    Rng rng(9);
    const auto x = encode_input(Bitset{1, 0});
    for (int i = 0; i < 20; ++i) type_i_feedback(bank, 0, x, 1e9, false, rng);
    CHECK(bank.state(0, 0) == N + 19);  // first step includes the literal
    CHECK(bank.state(0, 1) == N - 1);
  }

  TEST_CASE("type I rates match (s-1)/s and 1/s") {
    const std::size_t N = 1000;
    const std::size_t m = 4;
    const auto x = encode_input(Bitset{1, 0, 1, 0});
    for (double s : {1.0, 2.0, 5.0, 20.0}) {
      for (bool boost : {false, true}) {
        CAPTURE(s);
        CAPTURE(boost);
        auto bank = init_bank(1, m, N, 0);
        Rng rng(static_cast<std::uint64_t>(s * 100) + (boost ? 1 : 0));
        std::size_t inc = 0;
        std::size_t dec = 0;
        std::size_t true_trials = 0;
        std::size_t false_trials = 0;
        const int trials = 100000;
        for (int t = 0; t < trials; ++t) {
          for (std::size_t k = 0; k < 2 * m; ++k) bank.set_state(0, k, N - 1);
          type_i_feedback(bank, 0, x, s, boost, rng);
          for (std::size_t k = 0; k < 2 * m; ++k) {
            if (x[k]) {
              ++true_trials;
              inc += bank.state(0, k) == N ? 1 : 0;
            } else {
              ++false_trials;
              dec += bank.state(0, k) == N - 2 ? 1 : 0;
            }
          }
        }
        const double want_inc = boost ? 1.0 : (s - 1.0) / s;
        CHECK(std::abs(static_cast<double>(inc) / static_cast<double>(true_trials) - want_inc) <= 0.01);
        CHECK(std::abs(static_cast<double>(dec) / static_cast<double>(false_trials) - 1.0 / s) <= 0.01);
      }
    }
  }

  TEST_CASE("type I on a silent clause forgets every literal at 1/s") {
    const std::size_t N = 1000;
    const std::size_t m = 3;
    auto bank = init_bank(1, m, N, 0);
    Rng rng(77);
    const auto x = encode_input(Bitset{1, 1, 0});
    std::vector<std::size_t> dec(2 * m, 0);
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
      for (std::size_t k = 0; k < 2 * m; ++k) bank.set_state(0, k, N - 1);
      bank.set_state(0, m, N + 5);  // includes NOT f0, which is false in X
      REQUIRE_FALSE(clause_output(bank, 0, x, EvaluationMode::Learn));
      type_i_feedback(bank, 0, x, 5.0, true, rng);
      for (std::size_t k = 0; k < 2 * m; ++k) {
        const State start = k == m ? N + 5 : N - 1;
        dec[k] += bank.state(0, k) + 1 == start ? 1 : 0;
      }
    }
    for (std::size_t k = 0; k < 2 * m; ++k) {
      CAPTURE(k);
      CHECK(std::abs(static_cast<double>(dec[k]) / trials - 0.2) <= 0.01);
    }
  }

  TEST_CASE("type II examples") {
    const std::size_t N = 8;
    auto bank = init_bank(1, 2, N, 0);
    const auto x = encode_input(Bitset{1, 0});  // X = 1,0,0,1
    type_ii_feedback(bank, 0, x);
    CHECK(bank.state(0, 0) == N - 1);
    CHECK(bank.state(0, 1) == N);
    CHECK(bank.state(0, 2) == N);
    CHECK(bank.state(0, 3) == N - 1);
    // now the clause includes false literals and stays silent on this X
    const auto before = bank;
    type_ii_feedback(bank, 0, x);
    CHECK(bank == before);
  }

  TEST_CASE("type II never decrements and never touches true literals") {
    Rng rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t m = 1 + rng.below(90);
      const std::size_t N = 2 + rng.below(20);
      auto bank = sparse_bank(rng, 2, m, N, 0.02);
      for (std::size_t k = 0; k < 2 * m; ++k) {
        if (rng.bernoulli(0.3)) bank.set_state(0, k, static_cast<State>(rng.below(N)));
      }
      const auto x = encode_input(random_presence(rng, m, 0.5));
      const auto before = bank;
      const bool fired = clause_output(bank, 0, x, EvaluationMode::Learn);
      type_ii_feedback(bank, 0, x);
      for (std::size_t k = 0; k < 2 * m; ++k) {
        const State b = before.state(0, k);
        const State a = bank.state(0, k);
        REQUIRE(a >= b);
        if (x[k] || !fired || b >= N) {
          REQUIRE(a == b);
        } else {
          REQUIRE(a == b + 1);
        }
        REQUIRE(bank.state(1, k) == before.state(1, k));
      }
    }
  }

  TEST_CASE("states stay in range under long random feedback") {
    Rng rng(8);
    const std::size_t N = 4;
    auto bank = init_bank(3, 5, N, 0);
    for (int step = 0; step < 20000; ++step) {
      const auto x = encode_input(random_presence(rng, 5, 0.5));
      const std::size_t j = rng.below(3);
      if (rng.bernoulli(0.5)) {
        type_i_feedback(bank, j, x, 1.0 + rng.uniform() * 5, rng.bernoulli(0.5), rng);
      } else {
        type_ii_feedback(bank, j, x);
      }
    }
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 10; ++k) {
        CHECK(bank.state(j, k) <= 2 * N - 1);
        CHECK(bank.included(j, k) == (bank.state(j, k) >= N));
      }
    }
  }

  TEST_CASE("identical seeds give identical banks") {
    auto run = [](std::uint64_t seed) {
      Rng rng(seed);
      Rng data(1);
      auto bank = init_bank(4, 50, 128, seed);
      for (int step = 0; step < 500; ++step) {
        const auto x = encode_input(random_presence(data, 50, 0.3));
        for (std::size_t j = 0; j < 4; ++j) {
          type_i_feedback(bank, j, x, 3.0, false, rng);
          if (step % 3 == 0) type_ii_feedback(bank, j, x);
        }
      }
      return bank;
    };
    CHECK(run(5) == run(5));
    CHECK_FALSE(run(5) == run(6));
  }
}

TEST_SUITE("random") {
  TEST_CASE("bernoulli_mask frequencies") {
    Rng rng(123);
    for (double p : {0.01, 0.2, 0.5, 0.8, 0.97}) {
      CAPTURE(p);
      std::size_t ones = 0;
      const std::size_t bits = 1000;
      const int rounds = 400;
      for (int r = 0; r < rounds; ++r) {
        const Bitset mask = bernoulli_mask(rng, p, bits);
        REQUIRE(mask.size() == bits);
        REQUIRE((mask.words().back() & ~mask.tail_mask()) == 0);
        ones += mask.count();
      }
      CHECK(std::abs(static_cast<double>(ones) / (bits * rounds) - p) <= 0.005);
    }
    CHECK(bernoulli_mask(rng, 0.0, 100).none());
    CHECK(bernoulli_mask(rng, 1.0, 100).count() == 100);
  }

  TEST_CASE("bernoulli_mask positions are uniform") {
    Rng rng(4);
    std::vector<std::size_t> hits(70, 0);
    for (int r = 0; r < 20000; ++r) bernoulli_mask(rng, 0.1, 70).for_each_set([&](std::size_t i) { ++hits[i]; });
    for (std::size_t i = 0; i < 70; ++i) CHECK(std::abs(static_cast<double>(hits[i]) / 20000 - 0.1) < 0.015);
  }

  TEST_CASE("streams") {
    Rng a(1, 2);
    Rng b(1, 2);
    Rng c(1, 3);
    CHECK(a == b);
    CHECK(a() == b());
    CHECK_FALSE(a() == c());
    CHECK(Rng(9).split(4) == Rng(9).split(4));
    CHECK(stream_id("x") != stream_id("y"));
    Rng d(5);
    for (int i = 0; i < 1000; ++i) CHECK(d.below(7) < 7);
    for (int i = 0; i < 1000; ++i) {
      const double u = d.uniform();
      CHECK((u >= 0.0 && u < 1.0));
    }
  }
}
