#include "tmrbe/state_probe.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

#include "tmrbe/errors.hpp"

namespace tmrbe {

StateSnapshot snapshot(const CoalescedModel& model, std::size_t clause_id, std::size_t round) {
  const auto& bank = model.bank();
  if (clause_id >= bank.clauses()) throw std::out_of_range("snapshot: clause id out of range");
  StateSnapshot snap;
  snap.round = round;
  snap.clause_id = clause_id;
  snap.features = bank.features();
  snap.half_states = bank.half_states();
  const auto states = bank.clause_states(clause_id);
  snap.entries.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    snap.entries.push_back({static_cast<std::uint32_t>(k), k >= snap.features, states[k]});
  }
  return snap;
}

DepthSummary summarize(const StateSnapshot& snap) {
  double sum[2] = {0, 0};
  std::size_t included[2] = {0, 0};
  std::size_t count[2] = {0, 0};
  for (const auto& e : snap.entries) {
    const int g = e.is_negated ? 1 : 0;
    sum[g] += e.state;
    included[g] += e.state >= snap.half_states ? 1 : 0;
    ++count[g];
  }
  if (count[0] != snap.features || count[1] != snap.features) {
    throw InvariantError("snapshot does not cover each literal group with exactly m entries");
  }
  const auto m = static_cast<double>(snap.features);
  return {sum[0] / m, sum[1] / m, static_cast<double>(included[0]) / m, static_cast<double>(included[1]) / m};
}

DepthSummary summarize_all_clauses(const CoalescedModel& model) {
  DepthSummary total;
  const std::size_t n = model.clauses();
  for (std::size_t j = 0; j < n; ++j) {
    const auto d = summarize(snapshot(model, j, 0));
    total.mean_state_original += d.mean_state_original;
    total.mean_state_negated += d.mean_state_negated;
    total.frac_included_original += d.frac_included_original;
    total.frac_included_negated += d.frac_included_negated;
  }
  const auto dn = static_cast<double>(n);
  total.mean_state_original /= dn;
  total.mean_state_negated /= dn;
  total.frac_included_original /= dn;
  total.frac_included_negated /= dn;
  return total;
}

std::vector<HistogramBin> histogram(const StateSnapshot& snap, std::size_t bins) {
  require(bins >= 1, "histogram: bins must be >= 1");
  const std::size_t states = 2 * snap.half_states;
  bins = std::min(bins, states);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lo = b * states / bins;
    out[b].hi = (b + 1) * states / bins;
  }
  for (const auto& e : snap.entries) {
    const std::size_t b = static_cast<std::size_t>(e.state) * bins / states;
    (e.is_negated ? out[b].negated : out[b].original) += 1;
  }
  return out;
}

void write_snapshot_csv(const StateSnapshot& snap, std::ostream& out) {
  out << "clause_id,literal_index,is_negated,state\n";
  for (const auto& e : snap.entries) {
    out << snap.clause_id << ',' << e.literal_index << ',' << (e.is_negated ? 1 : 0) << ',' << e.state << '\n';
  }
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Epochs:
      return "epochs";
    case SweepAxis::Specificity:
      return "s";
    case SweepAxis::Margin:
      return "T";
  }
  return "?";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "epochs") return SweepAxis::Epochs;
  if (name == "s") return SweepAxis::Specificity;
  if (name == "T") return SweepAxis::Margin;
  throw ConfigError("unknown sweep axis '" + name + "' (expected epochs, s or T)");
}

namespace {

struct CellOutput {
  std::vector<SweepRow> rows;
  std::vector<HistogramRow> histograms;
  std::string failure;
};

CellOutput run_cell(const CorpusIndex& index, FeatureId tw, SweepAxis axis, double value, const EmbedParams& fixed,
                    const SweepOptions& options) {
  CellOutput out;
  try {
    EmbedParams params = fixed;
    std::size_t epochs = options.epochs;
    switch (axis) {
      case SweepAxis::Epochs:
        require(value >= 1 && value == static_cast<double>(static_cast<std::size_t>(value)),
                "epochs value must be a positive integer");
        epochs = static_cast<std::size_t>(value);
        break;
      case SweepAxis::Specificity:
        params.specificity = value;
        break;
      case SweepAxis::Margin:
        require(value >= 1 && value == static_cast<double>(static_cast<std::int64_t>(value)),
                "T value must be a positive integer");
        params.margin = static_cast<std::int64_t>(value);
        break;
    }
    const std::size_t per_epoch = options.rounds_per_epoch > 0 ? options.rounds_per_epoch : index.size();
    require(per_epoch >= 1, "sweep needs at least one round per epoch");
    params.rounds = epochs * per_epoch;

    const std::size_t every = std::max<std::size_t>(1, options.checkpoint_every);
    EmbedHooks hooks;
    hooks.every = per_epoch;
    hooks.observer = [&](std::size_t round, const CoalescedModel& model) {
      const std::size_t epoch = round / per_epoch;
      if (epoch % every != 0 && epoch != epochs) return;
      const StateSnapshot snap = snapshot(model, options.probe_clause, round);
      const DepthSummary d = options.all_clauses ? summarize_all_clauses(model) : summarize(snap);
      out.rows.push_back({axis, value, epoch, false, d.mean_state_original, d.frac_included_original,
                          params.half_states, params.seed});
      out.rows.push_back({axis, value, epoch, true, d.mean_state_negated, d.frac_included_negated,
                          params.half_states, params.seed});
      if (options.histogram_bins > 0) {
        for (const auto& bin : histogram(snap, options.histogram_bins)) {
          out.histograms.push_back({axis, value, epoch, bin});
        }
      }
    };
    if (options.probe_clause >= params.clauses) throw ConfigError("probe clause id >= n");
    embed_word(index, tw, params, hooks);
  } catch (const std::exception& e) {
    out.rows.clear();
    out.histograms.clear();
    out.failure = to_string(axis) + "=" + std::to_string(value) + ": " + e.what();
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const CorpusIndex& index, FeatureId tw, SweepAxis axis, const std::vector<double>& values,
                      const EmbedParams& fixed, const SweepOptions& options) {
  require(!values.empty(), "sweep needs at least one value");
  std::vector<CellOutput> cells(values.size());
  const unsigned threads = std::max(1U, options.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < values.size(); ++i) cells[i] = run_cell(index, tw, axis, values[i], fixed, options);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < values.size(); i += threads) {
          cells[i] = run_cell(index, tw, axis, values[i], fixed, options);
        }
      });
    }
  }

  SweepResult result;
  for (auto& c : cells) {
    result.rows.insert(result.rows.end(), c.rows.begin(), c.rows.end());
    result.histograms.insert(result.histograms.end(), c.histograms.begin(), c.histograms.end());
    if (!c.failure.empty()) result.failures.push_back(std::move(c.failure));
  }
  return result;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "axis,value,checkpoint,group,mean_state,frac_included,N,seed\n";
  for (const auto& r : rows) {
    out << to_string(r.axis) << ',' << r.value << ',' << r.checkpoint << ',' << (r.negated ? "negated" : "original")
        << ',' << r.mean_state << ',' << r.frac_included << ',' << r.half_states << ',' << r.seed << '\n';
  }
}

void write_histogram_csv(const std::vector<HistogramRow>& rows, std::ostream& out) {
  out << "axis,value,checkpoint,group,bin_lo,bin_hi,count\n";
  for (const auto& r : rows) {
    const std::string prefix = to_string(r.axis) + ',';
    out << prefix << r.value << ',' << r.checkpoint << ",original," << r.bin.lo << ',' << r.bin.hi << ','
        << r.bin.original << '\n';
    out << prefix << r.value << ',' << r.checkpoint << ",negated," << r.bin.lo << ',' << r.bin.hi << ','
        << r.bin.negated << '\n';
  }
}

}  // namespace tmrbe
