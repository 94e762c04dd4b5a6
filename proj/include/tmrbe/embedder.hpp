#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "tmrbe/bitset.hpp"
#include "tmrbe/coalesced_model.hpp"
#include "tmrbe/datasets.hpp"
#include "tmrbe/rng.hpp"

namespace tmrbe {

using FeatureId = std::uint32_t;

/// Documents as sorted feature-id sets plus an inverted feature -> documents index.
class CorpusIndex {
 public:
  CorpusIndex() = default;
  CorpusIndex(std::size_t features, std::vector<std::vector<FeatureId>> documents);

  static CorpusIndex from_documents(std::span<const Document> docs, const Vocabulary& vocab);

  std::size_t features() const { return features_; }
  std::size_t size() const { return documents_.size(); }
  const std::vector<FeatureId>& document(std::size_t d) const { return documents_.at(d); }
  const std::vector<std::uint32_t>& postings(FeatureId f) const { return inverted_.at(f); }

  /// Documents that contain (q=1) or lack (q=0) the feature.
  std::vector<std::uint32_t> pool(FeatureId f, int q) const;

  /// Rebuilds the inverted index from scratch and compares.
  bool consistent() const;

 private:
  std::size_t features_ = 0;
  std::vector<std::vector<FeatureId>> documents_;
  std::vector<std::vector<std::uint32_t>> inverted_;
};

/// How many documents a round unions: an absolute count, or a proportion of
/// the matching pool (at least one document).
struct Window {
  enum class Mode { Count, Proportion };
  Mode mode = Mode::Count;
  double value = 25;

  std::size_t resolve(std::size_t pool_size) const;
};

struct Selection {
  std::vector<std::uint32_t> documents;
  Bitset features;  // union U as a presence vector over m features
};

/// Samples documents uniformly without replacement from the pool matching q
/// and returns their union.
Selection select_documents(const CorpusIndex& index, FeatureId tw, int q, const Window& window, Rng& rng);

struct EmbedParams {
  std::size_t clauses = 10;
  std::int64_t margin = 3200;
  double specificity = 5.0;
  std::size_t half_states = 2048;
  bool boost_true_positive = true;
  Window window;
  std::size_t rounds = 1000;
  double positive_ratio = 0.5;  // P(q = 1) per round
  std::uint64_t seed = 0;
  std::optional<State> initial_state;

  void validate() const;
};

struct EmbeddingResult {
  FeatureId target_word = 0;
  std::size_t features = 0;
  std::vector<std::vector<std::size_t>> clauses;
  std::vector<std::int32_t> weights;
  std::vector<double> dense;
  EmbedParams params;
  std::size_t positive_rounds = 0;

  bool operator==(const EmbeddingResult& other) const;
};

/// Called with the number of completed rounds and the model at that point.
using RoundObserver = std::function<void(std::size_t, const CoalescedModel&)>;

struct EmbedHooks {
  std::size_t every = 0;  // observer cadence in rounds; 0 disables
  RoundObserver observer;
};

/// Single-word autoencoder embedding. Each round draws q, unions a window of
/// documents that contain (q=1) or lack (q=0) the target word, encodes the
/// union as X and updates the model.
EmbeddingResult embed_word(const CorpusIndex& index, FeatureId tw, const EmbedParams& params,
                           const EmbedHooks& hooks = {});

/// dense[f] = sum of weights of clauses including feature f minus sum of
/// weights of clauses including its negation.
std::vector<double> export_dense(std::span<const std::vector<std::size_t>> clauses,
                                 std::span<const std::int32_t> weights, std::size_t features);

/// Structured-text (JSON) export. Tokens are named when a vocabulary is given.
void write_embedding_json(const EmbeddingResult& result, const Vocabulary* vocab, std::ostream& out);

}  // namespace tmrbe
