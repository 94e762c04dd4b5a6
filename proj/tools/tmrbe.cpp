// tmrbe command-line driver: dataset generation, classifier training, sweeps,
// single-word embedding, RbE grids and state-space probes.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tmrbe/classifier.hpp"
#include "tmrbe/datasets.hpp"
#include "tmrbe/embedder.hpp"
#include "tmrbe/errors.hpp"
#include "tmrbe/provenance.hpp"
#include "tmrbe/rbe.hpp"
#include "tmrbe/state_probe.hpp"

namespace fs = std::filesystem;
using namespace tmrbe;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct CommonOptions {
  std::string config;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool deterministic = false;

  unsigned workers() const { return deterministic ? 1U : std::max(1U, threads); }
};

void add_common(CLI::App* app, CommonOptions& opts) {
  app->add_option("--config", opts.config, "flat key=value file; command-line flags override it");
  app->add_option("--out-dir", opts.out_dir, "output directory")->capture_default_str();
  app->add_option("--seed", opts.seed, "random seed, falls back to $TM_RBE_SEED")->capture_default_str();
  app->add_option("--threads", opts.threads, "worker threads for independent cells")->capture_default_str();
  app->add_flag("--deterministic", opts.deterministic, "serial execution, no timing columns");
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

void set_unless_given(CLI::Option* opt, const std::string& value, const std::string& origin) {
  if (opt->count() > 0) return;
  try {
    opt->add_result(value);
    opt->run_callback();
  } catch (const CLI::Error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

// Fills options not given on the command line from the config file, then
// the seed from the environment.
void apply_config(CLI::App* app, const CommonOptions& opts) {
  if (!opts.config.empty()) {
    std::ifstream in(opts.config);
    if (!in) throw DataError("cannot read config file " + opts.config);
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      const auto text = trim(line);
      if (text.empty() || text.front() == '#' || text.front() == ';') continue;
      const auto where = opts.config + ":" + std::to_string(lineno);
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
      const auto key = trim(std::string_view(text).substr(0, eq));
      auto* opt = key == "config" ? nullptr : app->get_option_no_throw("--" + key);
      if (opt == nullptr) throw ConfigError(where + ": unknown key '" + key + "' for " + app->get_name());
      set_unless_given(opt, trim(std::string_view(text).substr(eq + 1)), where);
    }
  }
  if (const char* env = std::getenv("TM_RBE_SEED"); env != nullptr && *env != '\0') {
    set_unless_given(app->get_option("--seed"), env, "TM_RBE_SEED");
  }
}

fs::path prepare_out_dir(const CommonOptions& opts) {
  fs::path dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  return out;
}

Provenance base_provenance(const std::string& command, const CommonOptions& opts) {
  Provenance p(command);
  p.add("seed", opts.seed).add("deterministic", opts.deterministic);
  return p;
}

// ---------------------------------------------------------------------------
// Datasets shared by train / sweep / rbe.

struct DataOptions {
  std::string train_cache;
  std::string test_cache;
  std::string train_text;
  std::string test_text;
  std::size_t vocab_size = 5000;
  std::string name;
};

void add_data(CLI::App* app, DataOptions& opts) {
  app->add_option("--train", opts.train_cache, "training dataset cache (.tmds)");
  app->add_option("--test", opts.test_cache, "test dataset cache (.tmds)");
  app->add_option("--train-text", opts.train_text, "training file, one 'label<TAB>text' per line");
  app->add_option("--test-text", opts.test_text, "test file, one 'label<TAB>text' per line");
  app->add_option("--vocab-size", opts.vocab_size, "vocabulary size for text input")->capture_default_str();
  app->add_option("--dataset-name", opts.name, "name written to reports");
}

DatasetPair load_data(const DataOptions& opts) {
  const bool cache = !opts.train_cache.empty() || !opts.test_cache.empty();
  const bool text = !opts.train_text.empty() || !opts.test_text.empty();
  if (cache == text) throw ConfigError("give either --train/--test caches or --train-text/--test-text");
  DatasetPair pair;
  if (cache) {
    if (opts.train_cache.empty() || opts.test_cache.empty()) throw ConfigError("both --train and --test are required");
    pair.train = load_dataset(opts.train_cache);
    pair.test = load_dataset(opts.test_cache);
  } else {
    if (opts.train_text.empty() || opts.test_text.empty()) {
      throw ConfigError("both --train-text and --test-text are required");
    }
    require(opts.vocab_size >= 1, "--vocab-size must be >= 1");
    const auto train = load_labeled_text(opts.train_text);
    const auto test = load_labeled_text(opts.test_text);
    const auto vocab = build_vocab(train.documents, opts.vocab_size);
    pair.train = to_dataset(train, vocab, Split::Train);
    pair.test = to_dataset(test, vocab, Split::Test);
    pair.train.classes = pair.test.classes = std::max(pair.train.classes, pair.test.classes);
  }
  if (pair.train.features != pair.test.features) throw DataError("train and test splits disagree on m");
  if (pair.train.examples.empty()) throw DataError("training split is empty");
  return pair;
}

std::string dataset_name(const DataOptions& opts) {
  if (!opts.name.empty()) return opts.name;
  const auto& path = opts.train_cache.empty() ? opts.train_text : opts.train_cache;
  return fs::path(path).stem().string();
}

// ---------------------------------------------------------------------------
// Classifier hyperparameters shared by train / sweep.

struct TrainOptions {
  std::size_t clauses = 100;
  std::int64_t margin = 128;
  double specificity = 1.0;
  std::size_t half_states = 2048;
  std::size_t epochs = 25;
  bool no_boost = false;
  std::optional<State> init_state;
};

void add_train(CLI::App* app, TrainOptions& opts) {
  app->add_option("--clauses", opts.clauses, "clauses per class model (n)")->capture_default_str();
  app->add_option("--T", opts.margin, "voting margin T")->capture_default_str();
  app->add_option("--s", opts.specificity, "specificity s")->capture_default_str();
  app->add_option("--N", opts.half_states, "states per action (N)")->capture_default_str();
  app->add_option("--epochs", opts.epochs, "training epochs")->capture_default_str();
  app->add_flag("--no-boost", opts.no_boost, "disable boosting of true positive feedback");
  app->add_option("--init-state", opts.init_state, "initial automaton state, default N-1");
}

ModelParams model_params(const TrainOptions& opts) {
  ModelParams p;
  p.clauses = opts.clauses;
  p.margin = opts.margin;
  p.specificity = opts.specificity;
  p.half_states = opts.half_states;
  p.boost_true_positive = !opts.no_boost;
  p.initial_state = opts.init_state;
  p.features = 1;  // placeholder; validated again per classifier
  p.validate();
  return p;
}

void add_train_provenance(Provenance& p, const TrainOptions& opts) {
  p.add("n", static_cast<std::uint64_t>(opts.clauses))
      .add("T", opts.margin)
      .add("s", opts.specificity)
      .add("N", static_cast<std::uint64_t>(opts.half_states))
      .add("epochs", static_cast<std::uint64_t>(opts.epochs))
      .add("boost", !opts.no_boost);
  if (opts.init_state) p.add("init_state", static_cast<std::uint64_t>(*opts.init_state));
}

double train_once(const DatasetPair& data, const TrainOptions& opts, std::uint64_t seed) {
  const auto train = encode_dataset(data.train);
  auto test = encode_dataset(data.test);
  Classifier clf(std::max<std::size_t>(data.train.classes, 1), data.train.features, model_params(opts), seed);
  return train_and_evaluate(clf, train, test, opts.epochs).accuracy;
}

// ---------------------------------------------------------------------------

struct GenArtificialCmd {
  CommonOptions common;
  ArtificialSpec spec;

  void attach(CLI::App* app) {
    add_common(app, common);
    app->add_option("--num-features", spec.num_features)->capture_default_str();
    app->add_option("--train-n", spec.train_n)->capture_default_str();
    app->add_option("--test-n", spec.test_n)->capture_default_str();
    app->add_option("--noise", spec.noise)->capture_default_str();
    app->add_option("--unique-per-class", spec.unique_per_class)->capture_default_str();
    app->add_option("--classes", spec.classes)->capture_default_str();
  }

  int run() {
    spec.seed = common.seed;
    auto data = gen_artificial(spec);
    const auto dir = prepare_out_dir(common);
    save_dataset(data.train, (dir / "train.tmds").string());
    save_dataset(data.test, (dir / "test.tmds").string());
    auto prov = base_provenance("gen-artificial", common);
    prov.add("num_features", static_cast<std::uint64_t>(spec.num_features))
        .add("train_n", static_cast<std::uint64_t>(spec.train_n))
        .add("test_n", static_cast<std::uint64_t>(spec.test_n))
        .add("noise", spec.noise)
        .add("unique_per_class", static_cast<std::uint64_t>(spec.unique_per_class))
        .add("classes", static_cast<std::uint64_t>(spec.classes));
    auto out = open_out(dir / "artificial_spec.csv");
    out << prov.line() << '\n';
    write_artificial_spec_csv(spec, out);
    std::cout << "wrote " << (dir / "train.tmds").string() << ", " << (dir / "test.tmds").string() << '\n';
    return kOk;
  }
};

struct TrainCmd {
  CommonOptions common;
  DataOptions data;
  TrainOptions train;
  bool save_models = false;

  void attach(CLI::App* app) {
    add_common(app, common);
    add_data(app, data);
    add_train(app, train);
    app->add_flag("--save-models", save_models, "write one model file per class");
  }

  int run() {
    model_params(train);
    const auto pair = load_data(data);
    const auto dir = prepare_out_dir(common);
    const auto start = std::chrono::steady_clock::now();

    const auto enc_train = encode_dataset(pair.train);
    const auto enc_test = encode_dataset(pair.test);
    Classifier clf(std::max<std::size_t>(pair.train.classes, 1), pair.train.features, model_params(train), common.seed);
    const double acc = train_and_evaluate(clf, enc_train, enc_test, train.epochs).accuracy;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto path = dir / "train_report.csv";
    const bool fresh = !fs::exists(path);
    auto out = open_out(path, std::ios::app);
    if (fresh) {
      auto prov = base_provenance("train", common);
      add_train_provenance(prov, train);
      out << prov.line() << '\n' << "dataset,s,T,n,epochs,accuracy,seed,wall_time_s\n";
    }
    out << dataset_name(data) << ',' << train.specificity << ',' << train.margin << ',' << train.clauses << ','
        << train.epochs << ',' << acc * 100.0 << ',' << common.seed << ',';
    if (!common.deterministic) out << seconds;
    out << '\n';

    if (save_models) {
      for (std::size_t c = 0; c < clf.classes(); ++c) {
        save_model(clf.model(c), (dir / ("model_class" + std::to_string(c) + ".tmm")).string());
      }
    }
    std::cout << "accuracy " << acc * 100.0 << "%\n";
    return kOk;
  }
};

struct SweepCmd {
  CommonOptions common;
  DataOptions data;
  TrainOptions train;
  std::string axis = "s";
  std::vector<double> values;

  void attach(CLI::App* app) {
    add_common(app, common);
    add_data(app, data);
    add_train(app, train);
    app->add_option("--axis", axis, "s or T")->check(CLI::IsMember({"s", "T"}))->capture_default_str();
    app->add_option("--values", values, "comma-separated values")->delimiter(',');
  }

  int run() {
    model_params(train);
    if (values.empty()) throw ConfigError("--values must list at least one value");
    const auto pair = load_data(data);
    const auto dir = prepare_out_dir(common);

    std::vector<TrainOptions> cells;
    for (double v : values) {
      TrainOptions t = train;
      if (axis == "s") {
        t.specificity = v;
      } else {
        require(v >= 1 && v == static_cast<double>(static_cast<std::int64_t>(v)), "T values must be positive integers");
        t.margin = static_cast<std::int64_t>(v);
      }
      model_params(t);
      cells.push_back(t);
    }

    std::vector<double> acc(cells.size());
    const unsigned workers = common.workers();
    {
      std::vector<std::jthread> pool;
      auto work = [&](unsigned w) {
        for (std::size_t i = w; i < cells.size(); i += workers) acc[i] = train_once(pair, cells[i], common.seed);
      };
      if (workers == 1) {
        work(0);
      } else {
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      }
    }

    auto prov = base_provenance("sweep", common);
    prov.add("axis", axis);
    add_train_provenance(prov, train);
    const std::string name = dataset_name(data);

    std::ostringstream setup;
    if (axis == "s") {
      setup << "T=" << train.margin;
    } else {
      setup << "s=" << train.specificity;
    }
    setup << ";clauses=" << train.clauses;

    auto wide = open_out(dir / ("sweep_" + axis + ".csv"));
    wide << prov.line() << "\ndataset";
    for (double v : values) wide << ',' << axis << '=' << v;
    wide << ",setup\n" << name;
    for (double a : acc) wide << ',' << a * 100.0;
    wide << ',' << setup.str() << '\n';

    auto longf = open_out(dir / ("sweep_" + axis + "_long.csv"));
    longf << prov.line() << "\naxis,value,dataset,s,T,n,epochs,accuracy,seed\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      longf << axis << ',' << values[i] << ',' << name << ',' << cells[i].specificity << ',' << cells[i].margin << ','
            << cells[i].clauses << ',' << cells[i].epochs << ',' << acc[i] * 100.0 << ',' << common.seed << '\n';
      std::cout << axis << '=' << values[i] << " accuracy " << acc[i] * 100.0 << "%\n";
    }
    return kOk;
  }
};

// ---------------------------------------------------------------------------
// Embedding commands.

struct EmbedOptions {
  std::string corpus;
  std::string tw;
  std::size_t vocab_size = 40000;
  std::size_t clauses = 10;
  std::int64_t margin = 3200;
  double specificity = 5.0;
  std::size_t half_states = 2048;
  double u = 25;
  std::string u_mode = "count";
  std::size_t epochs = 25;
  std::size_t rounds_per_epoch = 0;
  double positive_ratio = 0.5;
  bool no_boost = false;
  std::optional<State> init_state;
};

void add_embed(CLI::App* app, EmbedOptions& opts) {
  app->add_option("--corpus", opts.corpus, "corpus file, one document per line");
  app->add_option("--tw", opts.tw, "target word");
  app->add_option("--vocab-size", opts.vocab_size)->capture_default_str();
  app->add_option("--clauses", opts.clauses, "clauses (n)")->capture_default_str();
  app->add_option("--T", opts.margin, "voting margin T")->capture_default_str();
  app->add_option("--s", opts.specificity, "specificity s")->capture_default_str();
  app->add_option("--N", opts.half_states, "states per action (N)")->capture_default_str();
  app->add_option("--u", opts.u, "window: document count, or fraction with --u-mode proportion")->capture_default_str();
  app->add_option("--u-mode", opts.u_mode)->check(CLI::IsMember({"count", "proportion"}))->capture_default_str();
  app->add_option("--epochs", opts.epochs)->capture_default_str();
  app->add_option("--rounds-per-epoch", opts.rounds_per_epoch, "0 means one round per document")->capture_default_str();
  app->add_option("--positive-ratio", opts.positive_ratio, "P(q=1) per round")->capture_default_str();
  app->add_flag("--no-boost", opts.no_boost);
  app->add_option("--init-state", opts.init_state, "initial automaton state, default N-1");
}

struct LoadedCorpus {
  Vocabulary vocab;
  CorpusIndex index;
  FeatureId tw = 0;
};

LoadedCorpus load_corpus_for(const EmbedOptions& opts) {
  require(!opts.corpus.empty(), "--corpus is required");
  require(!opts.tw.empty(), "--tw is required");
  require(opts.vocab_size >= 1, "--vocab-size must be >= 1");
  const auto docs = load_corpus(opts.corpus);
  LoadedCorpus lc;
  lc.vocab = build_vocab(docs, opts.vocab_size);
  const auto tokens = tokenize(opts.tw);
  const std::size_t id = tokens.size() == 1 ? lc.vocab.find(tokens.front()) : Vocabulary::npos;
  if (id == Vocabulary::npos) throw DataError("target word '" + opts.tw + "' is not in the corpus vocabulary");
  lc.tw = static_cast<FeatureId>(id);
  lc.index = CorpusIndex::from_documents(docs, lc.vocab);
  return lc;
}

EmbedParams embed_params(const EmbedOptions& opts, std::uint64_t seed, std::size_t per_epoch) {
  EmbedParams p;
  p.clauses = opts.clauses;
  p.margin = opts.margin;
  p.specificity = opts.specificity;
  p.half_states = opts.half_states;
  p.boost_true_positive = !opts.no_boost;
  p.window.mode = opts.u_mode == "count" ? Window::Mode::Count : Window::Mode::Proportion;
  p.window.value = opts.u;
  p.rounds = opts.epochs * per_epoch;
  p.positive_ratio = opts.positive_ratio;
  p.seed = seed;
  p.initial_state = opts.init_state;
  p.validate();
  ModelParams mp;
  mp.clauses = p.clauses;
  mp.margin = p.margin;
  mp.specificity = p.specificity;
  mp.half_states = p.half_states;
  mp.initial_state = p.initial_state;
  mp.features = 1;
  mp.validate();
  return p;
}

void add_embed_provenance(Provenance& p, const EmbedOptions& opts) {
  p.add("tw", opts.tw)
      .add("n", static_cast<std::uint64_t>(opts.clauses))
      .add("T", opts.margin)
      .add("s", opts.specificity)
      .add("N", static_cast<std::uint64_t>(opts.half_states))
      .add("u", opts.u)
      .add("u_mode", opts.u_mode)
      .add("epochs", static_cast<std::uint64_t>(opts.epochs))
      .add("rounds_per_epoch", static_cast<std::uint64_t>(opts.rounds_per_epoch))
      .add("vocab_size", static_cast<std::uint64_t>(opts.vocab_size))
      .add("boost", !opts.no_boost);
  if (opts.init_state) p.add("init_state", static_cast<std::uint64_t>(*opts.init_state));
}

struct EmbedCmd {
  CommonOptions common;
  EmbedOptions embed;
  bool probe = false;
  std::size_t probe_clause = 0;

  void attach(CLI::App* app) {
    add_common(app, common);
    add_embed(app, embed);
    app->add_flag("--probe", probe, "write a per-epoch state snapshot of the probe clause");
    app->add_option("--probe-clause", probe_clause)->capture_default_str();
  }

  int run() {
    embed_params(embed, common.seed, 1);
    const auto lc = load_corpus_for(embed);
    const std::size_t per_epoch = embed.rounds_per_epoch > 0 ? embed.rounds_per_epoch : lc.index.size();
    const auto params = embed_params(embed, common.seed, per_epoch);
    require(probe_clause < params.clauses, "--probe-clause must be < --clauses");
    const auto dir = prepare_out_dir(common);

    auto prov = base_provenance("embed", common);
    add_embed_provenance(prov, embed);

    EmbedHooks hooks;
    if (probe) {
      fs::create_directories(dir / "probe");
      hooks.every = per_epoch;
      hooks.observer = [&](std::size_t round, const CoalescedModel& model) {
        const auto epoch = round / per_epoch;
        auto out = open_out(dir / "probe" / ("epoch_" + std::to_string(epoch) + ".csv"));
        out << prov.line() << '\n';
        write_snapshot_csv(snapshot(model, probe_clause, round), out);
      };
    }
    const auto result = embed_word(lc.index, lc.tw, params, hooks);
    const auto path = dir / ("embedding_" + lc.vocab.token(lc.tw) + ".json");
    auto out = open_out(path);
    write_embedding_json(result, &lc.vocab, out);
    std::cout << "wrote " << path.string() << " (q=1 in " << result.positive_rounds << " of " << params.rounds
              << " rounds)\n";
    return kOk;
  }
};

struct ProbeCmd {
  CommonOptions common;
  EmbedOptions embed;
  std::string axis = "epochs";
  std::vector<double> values;
  SweepOptions sweep;

  void attach(CLI::App* app) {
    add_common(app, common);
    add_embed(app, embed);
    app->add_option("--axis", axis, "epochs, s or T")->check(CLI::IsMember({"epochs", "s", "T"}))->capture_default_str();
    app->add_option("--values", values, "comma-separated values")->delimiter(',');
    app->add_option("--checkpoint-every", sweep.checkpoint_every, "epochs between checkpoints")->capture_default_str();
    app->add_option("--probe-clause", sweep.probe_clause)->capture_default_str();
    app->add_flag("--all-clauses", sweep.all_clauses, "average the summary over all clauses");
    app->add_option("--hist-bins", sweep.histogram_bins, "state histogram bins, 0 disables")->capture_default_str();
  }

  int run() {
    embed_params(embed, common.seed, 1);
    if (values.empty()) throw ConfigError("--values must list at least one value");
    const auto lc = load_corpus_for(embed);
    const auto dir = prepare_out_dir(common);
    const std::size_t per_epoch = embed.rounds_per_epoch > 0 ? embed.rounds_per_epoch : lc.index.size();
    const auto params = embed_params(embed, common.seed, per_epoch);
    sweep.epochs = embed.epochs;
    sweep.rounds_per_epoch = per_epoch;
    sweep.threads = common.workers();
    const auto ax = parse_sweep_axis(axis);
    const auto result = run_sweep(lc.index, lc.tw, ax, values, params, sweep);

    auto prov = base_provenance("probe", common);
    add_embed_provenance(prov, embed);
    prov.add("axis", axis)
        .add("checkpoint_every", static_cast<std::uint64_t>(sweep.checkpoint_every))
        .add("probe_clause", static_cast<std::uint64_t>(sweep.probe_clause))
        .add("all_clauses", sweep.all_clauses);
    auto out = open_out(dir / ("state_sweep_" + axis + ".csv"));
    out << prov.line() << '\n';
    write_sweep_csv(result.rows, out);
    if (sweep.histogram_bins > 0) {
      auto hist = open_out(dir / ("state_hist_" + axis + ".csv"));
      hist << prov.line() << '\n';
      write_histogram_csv(result.histograms, hist);
    }
    for (const auto& f : result.failures) std::cerr << "sweep cell failed: " << f << '\n';
    std::cout << "wrote " << result.rows.size() << " rows\n";
    return result.failures.empty() ? kOk : kData;
  }
};

struct RbECmd {
  CommonOptions common;
  DataOptions data;
  RbEGridParams grid;
  std::vector<std::string> setups;

  void attach(CLI::App* app) {
    add_common(app, common);
    add_data(app, data);
    app->add_option("--setups", setups, "comma-separated s:T pairs, e.g. 1:256,3:128")->delimiter(',');
    app->add_option("--clauses", grid.clauses)->capture_default_str();
    app->add_option("--N", grid.half_states)->capture_default_str();
    app->add_option("--epochs", grid.epochs)->capture_default_str();
  }

  int run() {
    if (setups.empty()) throw ConfigError("--setups must list at least one s:T pair");
    std::vector<RbESetup> parsed;
    for (const auto& s : setups) {
      const auto colon = s.find(':');
      if (colon == std::string::npos) throw ConfigError("setup '" + s + "' is not of the form s:T");
      RbESetup setup;
      try {
        setup.specificity = std::stod(s.substr(0, colon));
        setup.margin = std::stoll(s.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("setup '" + s + "' is not of the form s:T");
      }
      ModelParams probe;
      probe.specificity = setup.specificity;
      probe.margin = setup.margin;
      probe.clauses = grid.clauses;
      probe.half_states = grid.half_states;
      probe.features = 1;
      probe.validate();
      parsed.push_back(setup);
    }
    const auto pair = load_data(data);
    const auto dir = prepare_out_dir(common);
    grid.dataset = dataset_name(data);
    grid.threads = common.workers();
    const auto reports = rbe_grid(pair.train, pair.test, parsed, grid, common.seed);

    auto prov = base_provenance("rbe", common);
    prov.add("n", static_cast<std::uint64_t>(grid.clauses))
        .add("N", static_cast<std::uint64_t>(grid.half_states))
        .add("epochs", static_cast<std::uint64_t>(grid.epochs));
    auto out = open_out(dir / "rbe.csv");
    out << prov.line() << '\n';
    write_rbe_csv(reports, out);
    bool failed = false;
    for (const auto& r : reports) {
      std::cout << "(s=" << r.setup.specificity << ", T=" << r.setup.margin << ") original " << r.counts.original
                << " negated " << r.counts.negated << " ratio " << r.ratio;
      if (r.accuracy) std::cout << " accuracy " << *r.accuracy * 100.0 << '%';
      if (!r.error.empty()) {
        std::cout << " error: " << r.error;
        failed = true;
      }
      std::cout << '\n';
    }
    return failed ? kData : kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tsetlin machine engine with literal state-space instrumentation"};
  app.require_subcommand(1);

  GenArtificialCmd gen;
  TrainCmd train;
  SweepCmd sweep;
  EmbedCmd embed;
  RbECmd rbe;
  ProbeCmd probe;
  struct Entry {
    CLI::App* app;
    const CommonOptions* common;
    std::function<int()> run;
  };
  const std::vector<Entry> entries = {
      {app.add_subcommand("gen-artificial", "generate the synthetic benchmark dataset"), &gen.common,
       [&] { return gen.run(); }},
      {app.add_subcommand("train", "train and evaluate a classifier"), &train.common, [&] { return train.run(); }},
      {app.add_subcommand("sweep", "accuracy sweep over s or T"), &sweep.common, [&] { return sweep.run(); }},
      {app.add_subcommand("embed", "embed a single target word"), &embed.common, [&] { return embed.run(); }},
      {app.add_subcommand("rbe", "count original vs negated literals per (s, T) setup"), &rbe.common,
       [&] { return rbe.run(); }},
      {app.add_subcommand("probe", "literal state-space sweep over epochs, s or T"), &probe.common,
       [&] { return probe.run(); }},
  };
  gen.attach(entries[0].app);
  train.attach(entries[1].app);
  sweep.attach(entries[2].app);
  embed.attach(entries[3].app);
  rbe.attach(entries[4].app);
  probe.attach(entries[5].app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (const auto& entry : entries) {
      if (!entry.app->parsed()) continue;
      apply_config(entry.app, *entry.common);
      return entry.run();
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
