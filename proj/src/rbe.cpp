#include "tmrbe/rbe.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <thread>

#include "tmrbe/errors.hpp"

namespace tmrbe {

namespace {

bool matches(std::int32_t weight, Polarity polarity) {
  switch (polarity) {
    case Polarity::Positive:
      return weight > 0;
    case Polarity::Negative:
      return weight < 0;
    case Polarity::Both:
      return weight != 0;
  }
  return false;
}

}  // namespace

FeatureCounts count_features(const CoalescedModel& model, Polarity polarity, std::optional<std::size_t> top_k) {
  const auto& weights = model.weights();
  std::vector<std::size_t> chosen;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (matches(weights[j], polarity)) chosen.push_back(j);
  }
  if (top_k && *top_k < chosen.size()) {
    std::stable_sort(chosen.begin(), chosen.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(weights[a]) > std::abs(weights[b]); });
    chosen.resize(*top_k);
  }

  FeatureCounts counts;
  const std::size_t m = model.features();
  for (auto j : chosen) {
    for (auto k : included_literals(model.bank(), j)) (k < m ? counts.original : counts.negated) += 1;
  }
  return counts;
}

FeatureCounts count_features(const Classifier& clf, Polarity polarity, std::optional<std::size_t> top_k) {
  FeatureCounts total;
  for (const auto& model : clf.models()) {
    const auto c = count_features(model, polarity, top_k);
    total.original += c.original;
    total.negated += c.negated;
  }
  return total;
}

double rbe_ratio(const FeatureCounts& counts) {
  return static_cast<double>(counts.negated) / static_cast<double>(std::max<std::size_t>(1, counts.original + counts.negated));
}

namespace {

RbEReport run_setup(const EncodedDataset& train, const EncodedDataset& test, std::size_t features, const RbESetup& setup,
                    const RbEGridParams& params, std::uint64_t seed) {
  RbEReport report;
  report.setup = setup;
  report.seed = seed;
  report.dataset = params.dataset;
  try {
    ModelParams mp;
    mp.clauses = params.clauses;
    mp.margin = setup.margin;
    mp.specificity = setup.specificity;
    mp.half_states = params.half_states;
    mp.boost_true_positive = params.boost_true_positive;
    Classifier clf(std::max<std::size_t>(train.classes, 1), features, mp, seed);
    report.accuracy = train_and_evaluate(clf, train, test, params.epochs).accuracy;
    report.counts = count_features(clf, Polarity::Positive);
    report.ratio = rbe_ratio(report.counts);
  } catch (const std::exception& e) {
    report.error = e.what();
  }
  return report;
}

}  // namespace

std::vector<RbEReport> rbe_grid(const LabeledDataset& train, const LabeledDataset& test,
                                const std::vector<RbESetup>& setups, const RbEGridParams& params, std::uint64_t seed) {
  require(!setups.empty(), "rbe grid needs at least one (s, T) setup");
  if (train.features != test.features) throw DataError("train and test splits disagree on m");
  const EncodedDataset enc_train = encode_dataset(train);
  EncodedDataset enc_test = encode_dataset(test);
  enc_test.classes = std::max(enc_test.classes, enc_train.classes);

  std::vector<RbEReport> reports(setups.size());
  const unsigned threads = std::max(1U, params.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < setups.size(); ++i) {
      reports[i] = run_setup(enc_train, enc_test, train.features, setups[i], params, seed);
    }
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < setups.size(); i += threads) {
          reports[i] = run_setup(enc_train, enc_test, train.features, setups[i], params, seed);
        }
      });
    }
  }
  return reports;
}

void write_rbe_csv(const std::vector<RbEReport>& reports, std::ostream& out) {
  out << "s,T,n_original,n_negated,rbe_ratio,accuracy,seed,dataset,error\n";
  for (const auto& r : reports) {
    out << r.setup.specificity << ',' << r.setup.margin << ',' << r.counts.original << ',' << r.counts.negated << ','
        << r.ratio << ',';
    if (r.accuracy) out << *r.accuracy * 100.0;
    out << ',' << r.seed << ',' << r.dataset << ',' << r.error << '\n';
  }
}

}  // namespace tmrbe
