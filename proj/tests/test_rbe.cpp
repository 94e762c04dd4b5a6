#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "support.hpp"
#include "tmrbe/errors.hpp"
#include "tmrbe/rbe.hpp"

using namespace tmrbe;

namespace {

ModelParams params(std::size_t n, std::size_t m) {
  ModelParams p;
  p.clauses = n;
  p.features = m;
  p.half_states = 16;
  return p;
}

CoalescedModel random_model(Rng& rng, std::size_t n, std::size_t m) {
  auto model = tm_create(params(n, m));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < 2 * m; ++k) model.bank().set_state(j, k, static_cast<State>(rng.below(32)));
    model.weights()[j] = static_cast<std::int32_t>(rng.below(9)) - 4;
  }
  return model;
}

// Independent count straight from the states.
FeatureCounts oracle(const CoalescedModel& model, Polarity polarity) {
  FeatureCounts c;
  const std::size_t m = model.features();
  for (std::size_t j = 0; j < model.clauses(); ++j) {
    const auto w = model.weights()[j];
    const bool keep = polarity == Polarity::Positive ? w > 0 : polarity == Polarity::Negative ? w < 0 : w != 0;
    if (!keep) continue;
    for (std::size_t k = 0; k < 2 * m; ++k) {
      if (model.bank().state(j, k) >= 16) (k < m ? c.original : c.negated) += 1;
    }
  }
  return c;
}

LabeledDataset tiny_split(Split split) {
  ArtificialSpec spec;
  spec.num_features = 12;
  spec.unique_per_class = 3;
  spec.noise = 0.1;
  spec.train_n = 120;
  spec.test_n = 60;
  auto pair = gen_artificial(spec);
  return split == Split::Train ? pair.train : pair.test;
}

}  // namespace

TEST_SUITE("count_features") {
  TEST_CASE("fresh model counts nothing") {
    const auto model = tm_create(params(6, 5));
    CHECK(count_features(model, Polarity::Positive) == FeatureCounts{0, 0});
    CHECK(count_features(model, Polarity::Both) == FeatureCounts{0, 0});
  }

  TEST_CASE("one positive clause with f, NOT g, NOT h") {
    auto model = tm_create(params(2, 4));  // weights +1, -1
    model.bank().set_state(0, 0, 16);       // f
    model.bank().set_state(0, 4 + 1, 16);   // NOT g
    model.bank().set_state(0, 4 + 2, 20);   // NOT h
    model.bank().set_state(1, 3, 16);       // negative clause, ignored
    CHECK(count_features(model, Polarity::Positive) == FeatureCounts{1, 2});
    CHECK(count_features(model, Polarity::Negative) == FeatureCounts{1, 0});
    CHECK(rbe_ratio({1, 2}) == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("zero-weight clauses are neither positive nor negative") {
    auto model = tm_create(params(1, 2));
    model.weights()[0] = 0;
    model.bank().set_state(0, 0, 16);
    CHECK(count_features(model, Polarity::Positive) == FeatureCounts{0, 0});
    CHECK(count_features(model, Polarity::Negative) == FeatureCounts{0, 0});
    CHECK(count_features(model, Polarity::Both) == FeatureCounts{0, 0});
  }

  TEST_CASE("matches the oracle and both = positive + negative") {
    Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
      const auto model = random_model(rng, 1 + rng.below(12), 1 + rng.below(10));
      const auto pos = count_features(model, Polarity::Positive);
      const auto neg = count_features(model, Polarity::Negative);
      const auto both = count_features(model, Polarity::Both);
      REQUIRE(pos == oracle(model, Polarity::Positive));
      REQUIRE(neg == oracle(model, Polarity::Negative));
      REQUIRE(both.original == pos.original + neg.original);
      REQUIRE(both.negated == pos.negated + neg.negated);
    }
  }

  TEST_CASE("invariant under clause reordering") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + rng.below(10);
      const std::size_t m = 1 + rng.below(8);
      const auto model = random_model(rng, n, m);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      auto shuffled = tm_create(params(n, m));
      for (std::size_t j = 0; j < n; ++j) {
        shuffled.weights()[j] = model.weights()[perm[j]];
        for (std::size_t k = 0; k < 2 * m; ++k) shuffled.bank().set_state(j, k, model.bank().state(perm[j], k));
      }
      for (auto pol : {Polarity::Positive, Polarity::Negative, Polarity::Both}) {
        REQUIRE(count_features(model, pol) == count_features(shuffled, pol));
      }
    }
  }

  TEST_CASE("top_k keeps the heaviest clauses and clamps") {
    auto model = tm_create(params(3, 2));
    model.weights() = {1, 5, 3};
    model.bank().set_state(0, 0, 16);
    model.bank().set_state(1, 2, 16);
    model.bank().set_state(2, 1, 16);
    model.bank().set_state(2, 3, 16);
    CHECK(count_features(model, Polarity::Positive, 1) == FeatureCounts{0, 1});
    CHECK(count_features(model, Polarity::Positive, 2) == FeatureCounts{1, 2});
    CHECK(count_features(model, Polarity::Positive, 99) == FeatureCounts{2, 2});
    CHECK(count_features(model, Polarity::Positive, 0) == FeatureCounts{0, 0});
  }

  TEST_CASE("ratio bounds") {
    CHECK(rbe_ratio({5, 0}) == 0.0);
    CHECK(rbe_ratio({0, 5}) == 1.0);
    CHECK(rbe_ratio({0, 0}) == 0.0);
  }
}

TEST_SUITE("rbe_grid") {
  TEST_CASE("one row per setup, duplicates kept, failures recorded") {
    const auto train = tiny_split(Split::Train);
    const auto test = tiny_split(Split::Test);
    RbEGridParams gp;
    gp.clauses = 10;
    gp.half_states = 64;
    gp.epochs = 2;
    gp.dataset = "tiny";
    const auto one = rbe_grid(train, test, {{1, 16}}, gp, 3);
    REQUIRE(one.size() == 1);
    CHECK(one[0].error.empty());
    REQUIRE(one[0].accuracy.has_value());
    CHECK(*one[0].accuracy >= 0.0);
    CHECK(*one[0].accuracy <= 1.0);
    CHECK(one[0].ratio == rbe_ratio(one[0].counts));

    const auto grid = rbe_grid(train, test, {{1, 16}, {1, 16}, {0.5, 16}, {3, 8}}, gp, 3);
    REQUIRE(grid.size() == 4);
    CHECK(grid[0].counts == grid[1].counts);
    CHECK(grid[0].counts == one[0].counts);
    CHECK_FALSE(grid[2].error.empty());
    CHECK_FALSE(grid[2].accuracy.has_value());
    CHECK(grid[3].error.empty());
    CHECK_THROWS_AS(rbe_grid(train, test, {}, gp, 3), ConfigError);

    gp.threads = 3;
    const auto threaded = rbe_grid(train, test, {{1, 16}, {1, 16}, {0.5, 16}, {3, 8}}, gp, 3);
    for (std::size_t i = 0; i < 4; ++i) CHECK(threaded[i].counts == grid[i].counts);
  }

  TEST_CASE("csv columns") {
    RbEReport r;
    r.setup = {1, 256};
    r.counts = {3, 9};
    r.ratio = 0.75;
    r.accuracy = 0.5;
    r.seed = 2;
    r.dataset = "artificial";
    std::ostringstream out;
    write_rbe_csv({r}, out);
    CHECK(out.str() ==
          "s,T,n_original,n_negated,rbe_ratio,accuracy,seed,dataset,error\n1,256,3,9,0.75,50,2,artificial,\n");
  }
}
