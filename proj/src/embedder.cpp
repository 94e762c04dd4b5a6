#include "tmrbe/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "tmrbe/errors.hpp"

namespace tmrbe {

CorpusIndex::CorpusIndex(std::size_t features, std::vector<std::vector<FeatureId>> documents)
    : features_(features), documents_(std::move(documents)), inverted_(features) {
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    auto& doc = documents_[d];
    std::sort(doc.begin(), doc.end());
    doc.erase(std::unique(doc.begin(), doc.end()), doc.end());
    for (FeatureId f : doc) {
      if (f >= features_) {
        throw DataError("document " + std::to_string(d) + " has feature " + std::to_string(f) + " >= m=" +
                        std::to_string(features_));
      }
      inverted_[f].push_back(static_cast<std::uint32_t>(d));
    }
  }
}

CorpusIndex CorpusIndex::from_documents(std::span<const Document> docs, const Vocabulary& vocab) {
  std::vector<std::vector<FeatureId>> ids;
  ids.reserve(docs.size());
  for (const auto& doc : docs) ids.push_back(feature_ids(doc, vocab));
  return CorpusIndex(vocab.size(), std::move(ids));
}

std::vector<std::uint32_t> CorpusIndex::pool(FeatureId f, int q) const {
  const auto& with = inverted_.at(f);
  if (q == 1) return with;
  std::vector<std::uint32_t> without;
  without.reserve(documents_.size() - with.size());
  auto it = with.begin();
  for (std::uint32_t d = 0; d < documents_.size(); ++d) {
    if (it != with.end() && *it == d) {
      ++it;
    } else {
      without.push_back(d);
    }
  }
  return without;
}

bool CorpusIndex::consistent() const {
  std::vector<std::vector<std::uint32_t>> rebuilt(features_);
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    for (FeatureId f : documents_[d]) rebuilt[f].push_back(static_cast<std::uint32_t>(d));
  }
  return rebuilt == inverted_;
}

std::size_t Window::resolve(std::size_t pool_size) const {
  if (mode == Mode::Count) return std::min(pool_size, static_cast<std::size_t>(value));
  const auto k = static_cast<std::size_t>(std::ceil(value * static_cast<double>(pool_size)));
  return std::clamp<std::size_t>(k, 1, pool_size);
}

namespace {

void check_window(const Window& w) {
  if (w.mode == Window::Mode::Count) {
    require(w.value >= 1 && w.value == std::floor(w.value), "window size u must be an integer >= 1");
  } else {
    require(w.value > 0 && w.value <= 1, "window proportion must be in (0, 1]");
  }
}

Selection select_from_pool(const CorpusIndex& index, const std::vector<std::uint32_t>& pool, const Window& window,
                           Rng& rng) {
  Selection sel;
  std::sample(pool.begin(), pool.end(), std::back_inserter(sel.documents), window.resolve(pool.size()), rng);
  sel.features = Bitset(index.features());
  for (auto d : sel.documents) {
    for (FeatureId f : index.document(d)) sel.features.set(f);
  }
  return sel;
}

void check_target(const CorpusIndex& index, FeatureId tw) {
  if (tw >= index.features()) {
    throw ConfigError("target word id " + std::to_string(tw) + " >= m=" + std::to_string(index.features()));
  }
}

}  // namespace

Selection select_documents(const CorpusIndex& index, FeatureId tw, int q, const Window& window, Rng& rng) {
  check_target(index, tw);
  check_window(window);
  require(q == 0 || q == 1, "select_documents: q must be 0 or 1");
  const auto pool = index.pool(tw, q);
  if (pool.empty()) {
    throw DataError("no documents " + std::string(q == 1 ? "contain" : "lack") + " target word " +
                    std::to_string(tw) + " (q=" + std::to_string(q) + ")");
  }
  return select_from_pool(index, pool, window, rng);
}

void EmbedParams::validate() const {
  check_window(window);
  require(positive_ratio >= 0 && positive_ratio <= 1, "positive_ratio must be in [0, 1]");
}

bool EmbeddingResult::operator==(const EmbeddingResult& other) const {
  return target_word == other.target_word && features == other.features && clauses == other.clauses &&
         weights == other.weights && dense == other.dense && positive_rounds == other.positive_rounds;
}

EmbeddingResult embed_word(const CorpusIndex& index, FeatureId tw, const EmbedParams& params, const EmbedHooks& hooks) {
  check_target(index, tw);
  params.validate();

  ModelParams mp;
  mp.clauses = params.clauses;
  mp.margin = params.margin;
  mp.specificity = params.specificity;
  mp.half_states = params.half_states;
  mp.features = index.features();
  mp.boost_true_positive = params.boost_true_positive;
  mp.seed = params.seed;
  mp.initial_state = params.initial_state;
  CoalescedModel model = tm_create(mp);

  const std::vector<std::uint32_t> pools[2] = {index.pool(tw, 0), index.pool(tw, 1)};
  if (params.rounds > 0) {
    for (int q = 0; q < 2; ++q) {
      if (pools[q].empty()) {
        throw DataError("no documents " + std::string(q == 1 ? "contain" : "lack") + " target word " +
                        std::to_string(tw) + " (q=" + std::to_string(q) + ")");
      }
    }
  }

  Rng rng(params.seed, stream_id("embed/rounds"));
  EmbeddingResult result;
  for (std::size_t round = 0; round < params.rounds; ++round) {
    const int q = rng.bernoulli(params.positive_ratio) ? 1 : 0;
    result.positive_rounds += static_cast<std::size_t>(q);
    const Selection sel = select_from_pool(index, pools[q], params.window, rng);
    if (sel.features.test(tw) != (q == 1)) {
      throw InvariantError("round " + std::to_string(round) + ": target word membership in U disagrees with q=" +
                           std::to_string(q));
    }
    const LiteralVector x = encode_input(sel.features);
    tm_update(model, x, q);
    if (hooks.every > 0 && hooks.observer && (round + 1) % hooks.every == 0) hooks.observer(round + 1, model);
  }

  auto state = tm_get_state(model);
  result.target_word = tw;
  result.features = index.features();
  result.dense = export_dense(state.clauses, state.weights, index.features());
  result.clauses = std::move(state.clauses);
  result.weights = std::move(state.weights);
  result.params = params;
  return result;
}

std::vector<double> export_dense(std::span<const std::vector<std::size_t>> clauses,
                                 std::span<const std::int32_t> weights, std::size_t features) {
  if (clauses.size() != weights.size()) throw ConfigError("export_dense: clauses and weights differ in length");
  std::vector<double> dense(features, 0.0);
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    for (auto k : clauses[j]) {
      if (k >= 2 * features) throw ConfigError("export_dense: literal index out of range");
      if (k < features) {
        dense[k] += weights[j];
      } else {
        dense[k - features] -= weights[j];
      }
    }
  }
  return dense;
}

void write_embedding_json(const EmbeddingResult& result, const Vocabulary* vocab, std::ostream& out) {
  using nlohmann::ordered_json;
  const std::size_t m = result.features;
  auto token = [&](std::size_t f) -> ordered_json {
    if (vocab != nullptr && f < vocab->size()) return vocab->token(f);
    return nullptr;
  };

  ordered_json doc;
  doc["format"] = "tmrbe-embedding";
  doc["version"] = 1;
  doc["target_word"] = result.target_word;
  doc["target_token"] = token(result.target_word);
  const auto& p = result.params;
  doc["hyperparameters"] = {{"n", p.clauses},
                            {"T", p.margin},
                            {"s", p.specificity},
                            {"N", p.half_states},
                            {"u", p.window.value},
                            {"u_mode", p.window.mode == Window::Mode::Count ? "count" : "proportion"},
                            {"r", p.rounds},
                            {"boost_true_positive", p.boost_true_positive},
                            {"positive_ratio", p.positive_ratio},
                            {"seed", p.seed}};
  doc["positive_rounds"] = result.positive_rounds;
  ordered_json clauses = ordered_json::array();
  for (std::size_t j = 0; j < result.clauses.size(); ++j) {
    ordered_json lits = ordered_json::array();
    for (auto k : result.clauses[j]) {
      const bool negated = k >= m;
      const std::size_t f = negated ? k - m : k;
      lits.push_back({{"index", k}, {"feature", f}, {"is_negated", negated}, {"token", token(f)}});
    }
    clauses.push_back({{"id", j}, {"weight", result.weights[j]}, {"literals", std::move(lits)}});
  }
  doc["clauses"] = std::move(clauses);
  doc["dense"] = result.dense;
  out << doc.dump(2) << '\n';
}

}  // namespace tmrbe
