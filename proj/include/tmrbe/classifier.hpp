#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tmrbe/coalesced_model.hpp"
#include "tmrbe/datasets.hpp"
#include "tmrbe/literals.hpp"
#include "tmrbe/rng.hpp"

namespace tmrbe {

/// One coalesced model per class. Training presents each example as q=1 to its
/// own class model and as q=0 to one other class model drawn uniformly.
class Classifier {
 public:
  /// `params.features` and `params.seed` are overridden per class.
  Classifier(std::size_t classes, std::size_t features, const ModelParams& params, std::uint64_t seed);

  std::size_t classes() const { return models_.size(); }
  const CoalescedModel& model(std::size_t cls) const { return models_.at(cls); }
  const std::vector<CoalescedModel>& models() const { return models_; }

  void fit_example(const LiteralVector& x, std::uint32_t label);
  /// One shuffled pass over the encoded examples.
  void fit_epoch(std::span<const LiteralVector> xs, std::span<const std::uint32_t> labels);

  std::vector<std::int64_t> scores(const LiteralVector& x) const;
  /// Argmax of per-class scores, ties to the lowest class index.
  std::uint32_t predict_class(const LiteralVector& x) const;

 private:
  std::vector<CoalescedModel> models_;
  Rng rng_;
};

struct EncodedDataset {
  std::vector<LiteralVector> inputs;
  std::vector<std::uint32_t> labels;
  std::size_t classes = 0;
};

EncodedDataset encode_dataset(const LabeledDataset& data);

double accuracy(const Classifier& clf, const EncodedDataset& data);

struct TrainResult {
  double accuracy = 0.0;  // in [0, 1]
  std::vector<double> epoch_accuracy;
};

/// Trains for `epochs` passes and scores the test split after each one.
/// With `track_epochs` false, only the final accuracy is computed.
TrainResult train_and_evaluate(Classifier& clf, const EncodedDataset& train, const EncodedDataset& test,
                               std::size_t epochs, bool track_epochs = false);

}  // namespace tmrbe
