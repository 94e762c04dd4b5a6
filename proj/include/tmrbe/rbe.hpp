#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tmrbe/classifier.hpp"
#include "tmrbe/coalesced_model.hpp"
#include "tmrbe/datasets.hpp"

namespace tmrbe {

/// Positive: weight > 0. Negative: weight < 0. Both: weight != 0.
enum class Polarity { Positive, Negative, Both };

struct FeatureCounts {
  std::size_t original = 0;
  std::size_t negated = 0;

  bool operator==(const FeatureCounts&) const = default;
};

/// Included-literal occurrences (with multiplicity across clauses) in clauses
/// of the given polarity, split into original (< m) and negated (>= m).
/// `top_k` keeps only the k clauses of largest |weight|, ties by clause id.
FeatureCounts count_features(const CoalescedModel& model, Polarity polarity,
                             std::optional<std::size_t> top_k = std::nullopt);

/// Sum over every class model.
FeatureCounts count_features(const Classifier& clf, Polarity polarity,
                             std::optional<std::size_t> top_k = std::nullopt);

/// n_negated / max(1, n_original + n_negated).
double rbe_ratio(const FeatureCounts& counts);

struct RbESetup {
  double specificity = 1.0;
  std::int64_t margin = 256;
};

struct RbEReport {
  RbESetup setup;
  FeatureCounts counts;
  double ratio = 0.0;
  std::optional<double> accuracy;
  std::uint64_t seed = 0;
  std::string dataset;
  std::string error;  // non-empty when the cell failed
};

struct RbEGridParams {
  std::size_t clauses = 100;
  std::size_t half_states = 2048;
  std::size_t epochs = 25;
  bool boost_true_positive = true;
  std::string dataset = "artificial";
  unsigned threads = 1;
};

/// Trains one classifier per setup and reports positive-clause counts and test
/// accuracy. A failing setup yields a report with `error` set.
std::vector<RbEReport> rbe_grid(const LabeledDataset& train, const LabeledDataset& test,
                                const std::vector<RbESetup>& setups, const RbEGridParams& params, std::uint64_t seed);

void write_rbe_csv(const std::vector<RbEReport>& reports, std::ostream& out);

}  // namespace tmrbe
