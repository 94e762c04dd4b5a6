#include "tmrbe/classifier.hpp"

#include <algorithm>
#include <numeric>

#include "tmrbe/errors.hpp"

namespace tmrbe {

Classifier::Classifier(std::size_t classes, std::size_t features, const ModelParams& params, std::uint64_t seed)
    : rng_(seed, stream_id("classifier")) {
  require(classes >= 1, "classifier needs at least one class");
  models_.reserve(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    ModelParams p = params;
    p.features = features;
    p.seed = seed ^ (0x9e3779b97f4a7c15ULL * (c + 1));
    models_.push_back(tm_create(p));
  }
}

void Classifier::fit_example(const LiteralVector& x, std::uint32_t label) {
  if (label >= models_.size()) throw DataError("label " + std::to_string(label) + " out of range");
  tm_update(models_[label], x, 1);
  if (models_.size() > 1) {
    auto other = static_cast<std::uint32_t>(rng_.below(models_.size() - 1));
    if (other >= label) ++other;
    tm_update(models_[other], x, 0);
  }
}

void Classifier::fit_epoch(std::span<const LiteralVector> xs, std::span<const std::uint32_t> labels) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng_);
  for (auto i : order) fit_example(xs[i], labels[i]);
}

std::vector<std::int64_t> Classifier::scores(const LiteralVector& x) const {
  std::vector<std::int64_t> out;
  out.reserve(models_.size());
  for (const auto& m : models_) out.push_back(predict(m, x).score);
  return out;
}

std::uint32_t Classifier::predict_class(const LiteralVector& x) const {
  const auto s = scores(x);
  return static_cast<std::uint32_t>(std::max_element(s.begin(), s.end()) - s.begin());
}

EncodedDataset encode_dataset(const LabeledDataset& data) {
  EncodedDataset out;
  out.classes = data.classes;
  out.inputs.reserve(data.examples.size());
  out.labels.reserve(data.examples.size());
  for (const auto& ex : data.examples) {
    out.inputs.push_back(encode_input(ex.presence));
    out.labels.push_back(ex.label);
  }
  return out;
}

double accuracy(const Classifier& clf, const EncodedDataset& data) {
  if (data.inputs.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.inputs.size(); ++i) {
    correct += clf.predict_class(data.inputs[i]) == data.labels[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.inputs.size());
}

TrainResult train_and_evaluate(Classifier& clf, const EncodedDataset& train, const EncodedDataset& test,
                               std::size_t epochs, bool track_epochs) {
  TrainResult result;
  for (std::size_t e = 0; e < epochs; ++e) {
    clf.fit_epoch(train.inputs, train.labels);
    if (track_epochs) result.epoch_accuracy.push_back(accuracy(clf, test));
  }
  result.accuracy = track_epochs && !result.epoch_accuracy.empty() ? result.epoch_accuracy.back() : accuracy(clf, test);
  return result;
}

}  // namespace tmrbe
