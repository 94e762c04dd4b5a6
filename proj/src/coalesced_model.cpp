#include "tmrbe/coalesced_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "tmrbe/errors.hpp"

namespace tmrbe {

void ModelParams::validate() const {
  require(clauses >= 1, "invalid hyperparameter n (clauses): must be >= 1");
  require(margin >= 1, "invalid hyperparameter T (margin): must be >= 1");
  require(specificity >= 1.0 && std::isfinite(specificity), "invalid hyperparameter s (specificity): must be >= 1");
  require(half_states >= 2 && half_states <= kMaxHalfStates, "invalid hyperparameter N (states): must be in [2, 32768]");
  require(features >= 1, "invalid hyperparameter m (features): must be >= 1");
  if (initial_state) {
    require(*initial_state <= 2 * half_states - 1, "invalid hyperparameter initial_state: must be in [0, 2N-1]");
  }
}

CoalescedModel::CoalescedModel(const ModelParams& params)
    : params_(params),
      bank_(init_bank(params.clauses, params.features, params.half_states, params.seed, params.initial_state)),
      weights_(params.clauses, -1) {
  const std::size_t positive = (params.clauses + 1) / 2;
  std::fill_n(weights_.begin(), positive, 1);
  const Rng root(params.seed);
  streams_.reserve(params.clauses);
  for (std::size_t j = 0; j < params.clauses; ++j) streams_.push_back(root.split(j));
}

bool CoalescedModel::same_content(const CoalescedModel& other) const {
  const auto& a = params_;
  const auto& b = other.params_;
  return a.clauses == b.clauses && a.margin == b.margin && a.specificity == b.specificity &&
         a.half_states == b.half_states && a.features == b.features &&
         a.boost_true_positive == b.boost_true_positive && a.seed == b.seed && weights_ == other.weights_ &&
         bank_ == other.bank_;
}

CoalescedModel tm_create(const ModelParams& params) {
  params.validate();
  return CoalescedModel(params);
}

ClassSum class_sum(const CoalescedModel& model, const LiteralVector& x, EvaluationMode mode) {
  ClassSum sum;
  const auto& bank = model.bank();
  for (std::size_t j = 0; j < bank.clauses(); ++j) {
    if (clause_output(bank, j, x, mode)) sum.raw += model.weights()[j];
  }
  const std::int64_t t = model.params().margin;
  sum.clamped = std::clamp(sum.raw, -t, t);
  return sum;
}

namespace {

void feedback_range(CoalescedModel& model, const LiteralVector& x, int q, double p, std::size_t begin,
                    std::size_t end, Bitset& selected) {
  const auto& params = model.params();
  auto& bank = model.bank();
  auto& weights = model.weights();
  for (std::size_t j = begin; j < end; ++j) {
    Rng& rng = model.clause_rng(j);
    if (!rng.bernoulli(p)) continue;
    selected.set(j);
    const bool fired = clause_output(bank, j, x, EvaluationMode::Learn);
    const bool positive = weights[j] >= 0;
    if (positive == (q == 1)) {
      type_i_feedback(bank, j, x, params.specificity, params.boost_true_positive, rng);
    } else {
      type_ii_feedback(bank, j, x);
    }
    if (fired) weights[j] += q == 1 ? 1 : -1;
  }
}

}  // namespace

UpdateTrace tm_update(CoalescedModel& model, const LiteralVector& x, int q, unsigned threads) {
  if (q != 0 && q != 1) throw ConfigError("tm_update: target q must be 0 or 1, got " + std::to_string(q));

  UpdateTrace trace;
  trace.sum = class_sum(model, x, EvaluationMode::Learn);
  const double t = static_cast<double>(model.params().margin);
  const double v = static_cast<double>(trace.sum.clamped);
  trace.selection_probability = q == 1 ? (t - v) / (2 * t) : (t + v) / (2 * t);
  const std::size_t n = model.clauses();
  trace.selected = Bitset(n);

  if (threads <= 1 || n < 2) {
    feedback_range(model, x, q, trace.selection_probability, 0, n, trace.selected);
    return trace;
  }

  // Each worker owns a word-aligned clause range, so `selected` words are disjoint too.
  const std::size_t words = Bitset::word_count(n);
  const std::size_t chunks = std::min<std::size_t>(threads, words);
  const std::size_t per = (words + chunks - 1) / chunks * 64;
  {
    std::vector<std::jthread> workers;
    for (std::size_t begin = 0; begin < n; begin += per) {
      const std::size_t end = std::min(n, begin + per);
      workers.emplace_back([&, begin, end] {
        feedback_range(model, x, q, trace.selection_probability, begin, end, trace.selected);
      });
    }
  }
  return trace;
}

ModelState tm_get_state(const CoalescedModel& model) {
  ModelState state;
  state.weights = model.weights();
  state.clauses.reserve(model.clauses());
  for (std::size_t j = 0; j < model.clauses(); ++j) state.clauses.push_back(included_literals(model.bank(), j));
  return state;
}

Prediction predict(const CoalescedModel& model, const LiteralVector& x) {
  const auto sum = class_sum(model, x, EvaluationMode::Predict);
  return {sum.raw >= 0, sum.raw};
}

// Model file layout, all integers little-endian:
//   char[8]  magic "TMRBMODL"
//   u32      version (1)
//   u32 m, u32 n, u32 N
//   i64 T, f64 s, u8 boost, u64 seed
//   i32      weights[n]
//   u16      states[n * 2m], clause-major
namespace {

constexpr char kModelMagic[8] = {'T', 'M', 'R', 'B', 'M', 'O', 'D', 'L'};
constexpr std::uint32_t kModelVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((u >> (8 * i)) & 0xFFU);
  out.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  static_assert(std::is_integral_v<T>);
  using U = std::make_unsigned_t<T>;
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw DataError("model file truncated");
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(bytes[i]) << (8 * i));
  return static_cast<T>(u);
}

}  // namespace

void save_model(const CoalescedModel& model, std::ostream& out) {
  const auto& p = model.params();
  out.write(kModelMagic, sizeof(kModelMagic));
  put<std::uint32_t>(out, kModelVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.features));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.clauses));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.half_states));
  put<std::int64_t>(out, p.margin);
  put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(p.specificity));
  put<std::uint8_t>(out, p.boost_true_positive ? 1 : 0);
  put<std::uint64_t>(out, p.seed);
  for (auto w : model.weights()) put<std::int32_t>(out, w);
  const auto& bank = model.bank();
  for (std::size_t j = 0; j < bank.clauses(); ++j) {
    for (State st : bank.clause_states(j)) put<std::uint16_t>(out, st);
  }
  if (!out) throw DataError("failed writing model");
}

CoalescedModel load_model(std::istream& in) {
  char magic[sizeof(kModelMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
    throw DataError("not a model file (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kModelVersion) throw DataError("unsupported model file version " + std::to_string(version));

  ModelParams p;
  p.features = get<std::uint32_t>(in);
  p.clauses = get<std::uint32_t>(in);
  p.half_states = get<std::uint32_t>(in);
  p.margin = get<std::int64_t>(in);
  p.specificity = std::bit_cast<double>(get<std::uint64_t>(in));
  p.boost_true_positive = get<std::uint8_t>(in) != 0;
  p.seed = get<std::uint64_t>(in);
  try {
    p.validate();
  } catch (const ConfigError& e) {
    throw DataError(std::string("model file holds invalid hyperparameters: ") + e.what());
  }

  CoalescedModel model(p);
  for (auto& w : model.weights_) w = get<std::int32_t>(in);
  for (std::size_t j = 0; j < p.clauses; ++j) {
    for (std::size_t k = 0; k < 2 * p.features; ++k) {
      const auto st = get<std::uint16_t>(in);
      if (st > 2 * p.half_states - 1) throw DataError("model file state out of range");
      model.bank_.set_state(j, k, st);
    }
  }
  return model;
}

void save_model(const CoalescedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  save_model(model, out);
}

CoalescedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path);
  return load_model(in);
}

}  // namespace tmrbe
