#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tmrbe/bitset.hpp"
#include "tmrbe/clause_bank.hpp"
#include "tmrbe/literals.hpp"
#include "tmrbe/rng.hpp"

namespace tmrbe {

struct ModelParams {
  std::size_t clauses = 100;       // n
  std::int64_t margin = 100;       // T
  double specificity = 1.0;        // s
  std::size_t half_states = 2048;  // N
  std::size_t features = 0;        // m
  bool boost_true_positive = true;
  std::uint64_t seed = 0;
  std::optional<State> initial_state;  // default N-1

  void validate() const;
};

struct ClassSum {
  std::int64_t raw = 0;
  std::int64_t clamped = 0;
};

/// Weighted-clause Tsetlin machine for a single binary output. Each clause owns
/// an independent random stream, so feedback may be partitioned by clause.
class CoalescedModel {
 public:
  CoalescedModel() = default;
  explicit CoalescedModel(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  const ClauseBank& bank() const { return bank_; }
  ClauseBank& bank() { return bank_; }
  const std::vector<std::int32_t>& weights() const { return weights_; }
  std::vector<std::int32_t>& weights() { return weights_; }
  Rng& clause_rng(std::size_t clause) { return streams_[clause]; }

  std::size_t clauses() const { return bank_.clauses(); }
  std::size_t features() const { return bank_.features(); }

  /// Equality on persisted content: hyperparameters, weights and states.
  bool same_content(const CoalescedModel& other) const;

 private:
  friend CoalescedModel load_model(std::istream& in);

  ModelParams params_;
  ClauseBank bank_;
  std::vector<std::int32_t> weights_;
  std::vector<Rng> streams_;
};

/// Weights start at +1 for clause ids < ceil(n/2) and -1 otherwise.
CoalescedModel tm_create(const ModelParams& params);

ClassSum class_sum(const CoalescedModel& model, const LiteralVector& x, EvaluationMode mode);

struct UpdateTrace {
  ClassSum sum;
  double selection_probability = 0.0;
  Bitset selected;
};

/// One coalesced update toward target bit q. `threads` > 1 partitions the
/// clause feedback; results are identical to the serial run.
UpdateTrace tm_update(CoalescedModel& model, const LiteralVector& x, int q, unsigned threads = 1);

struct ModelState {
  std::vector<std::vector<std::size_t>> clauses;
  std::vector<std::int32_t> weights;

  bool operator==(const ModelState&) const = default;
};

ModelState tm_get_state(const CoalescedModel& model);

struct Prediction {
  bool bit = false;
  std::int64_t score = 0;
};

/// Score is the Predict-mode raw class sum; the bit is 1 iff score >= 0.
Prediction predict(const CoalescedModel& model, const LiteralVector& x);

void save_model(const CoalescedModel& model, std::ostream& out);
CoalescedModel load_model(std::istream& in);
void save_model(const CoalescedModel& model, const std::string& path);
CoalescedModel load_model(const std::string& path);

}  // namespace tmrbe
