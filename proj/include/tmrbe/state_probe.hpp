#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tmrbe/coalesced_model.hpp"
#include "tmrbe/embedder.hpp"

namespace tmrbe {

struct SnapshotEntry {
  std::uint32_t literal_index = 0;
  bool is_negated = false;
  State state = 0;

  bool operator==(const SnapshotEntry&) const = default;
};

/// Automaton states of one clause at one training instant.
struct StateSnapshot {
  std::size_t round = 0;
  std::size_t clause_id = 0;
  std::size_t features = 0;     // m
  std::size_t half_states = 0;  // N
  std::vector<SnapshotEntry> entries;

  bool operator==(const StateSnapshot&) const = default;
};

/// Lower mean state means deeper forgetting.
struct DepthSummary {
  double mean_state_original = 0;
  double mean_state_negated = 0;
  double frac_included_original = 0;
  double frac_included_negated = 0;
};

StateSnapshot snapshot(const CoalescedModel& model, std::size_t clause_id, std::size_t round);

DepthSummary summarize(const StateSnapshot& snap);

/// Mean over every clause of the model.
DepthSummary summarize_all_clauses(const CoalescedModel& model);

struct HistogramBin {
  std::size_t lo = 0;  // inclusive state
  std::size_t hi = 0;  // exclusive state
  std::size_t original = 0;
  std::size_t negated = 0;
};

/// Equal-width bins over [0, 2N).
std::vector<HistogramBin> histogram(const StateSnapshot& snap, std::size_t bins);

/// Per-literal rows: clause_id,literal_index,is_negated,state.
void write_snapshot_csv(const StateSnapshot& snap, std::ostream& out);

enum class SweepAxis { Epochs, Specificity, Margin };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepOptions {
  std::size_t epochs = 25;            // fixed duration for s and T sweeps
  std::size_t rounds_per_epoch = 0;   // 0 means one round per corpus document
  std::size_t checkpoint_every = 1;   // epochs between checkpoints; the last epoch is always one
  std::size_t probe_clause = 0;
  bool all_clauses = false;           // aggregate over clauses instead of probing one
  std::size_t histogram_bins = 0;     // 0 disables histogram rows
  unsigned threads = 1;
};

struct SweepRow {
  SweepAxis axis = SweepAxis::Epochs;
  double value = 0;
  std::size_t checkpoint = 0;  // epoch
  bool negated = false;        // literal group
  double mean_state = 0;
  double frac_included = 0;
  std::size_t half_states = 0;
  std::uint64_t seed = 0;
};

struct HistogramRow {
  SweepAxis axis = SweepAxis::Epochs;
  double value = 0;
  std::size_t checkpoint = 0;
  HistogramBin bin;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<HistogramRow> histograms;
  std::vector<std::string> failures;
};

/// One embedding run per value with the same seed; two rows (original and
/// negated) per checkpoint. Failing values are reported and skipped.
SweepResult run_sweep(const CorpusIndex& index, FeatureId tw, SweepAxis axis, const std::vector<double>& values,
                      const EmbedParams& fixed, const SweepOptions& options);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_histogram_csv(const std::vector<HistogramRow>& rows, std::ostream& out);

}  // namespace tmrbe
