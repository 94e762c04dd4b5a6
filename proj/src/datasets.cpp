#include "tmrbe/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "tmrbe/errors.hpp"
#include "tmrbe/rng.hpp"

namespace tmrbe {

Document tokenize(std::string_view text) {
  Document out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (!std::ispunct(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) throw ConfigError("duplicate vocabulary token: " + tokens_[i]);
  }
}

std::size_t Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? npos : it->second;
}

Vocabulary build_vocab(std::span<const Document> corpus, std::size_t max_size) {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : corpus) {
    for (const auto& tok : doc) ++counts[tok];
  }
  if (counts.empty()) throw DataError("build_vocab: corpus is empty");

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > max_size) ranked.resize(max_size);

  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [tok, count] : ranked) tokens.push_back(tok);
  return Vocabulary(std::move(tokens));
}

Bitset binarize(const Document& doc, const Vocabulary& vocab) {
  Bitset presence(vocab.size());
  for (const auto& tok : doc) {
    const auto id = vocab.find(tok);
    if (id != Vocabulary::npos) presence.set(id);
  }
  return presence;
}

std::vector<std::uint32_t> feature_ids(const Document& doc, const Vocabulary& vocab) {
  std::vector<std::uint32_t> ids;
  for (const auto& tok : doc) {
    const auto id = vocab.find(tok);
    if (id != Vocabulary::npos) ids.push_back(static_cast<std::uint32_t>(id));
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void ArtificialSpec::validate() const {
  require(num_features >= 1, "artificial spec: num_features >= 1 violated");
  require(classes >= 1, "artificial spec: classes >= 1 violated");
  require(noise >= 0.0 && noise <= 1.0, "artificial spec: 0 <= noise <= 1 violated (noise=" + std::to_string(noise) + ")");
  require(unique_per_class * classes <= num_features,
          "artificial spec: unique_per_class * classes <= num_features violated (" + std::to_string(unique_per_class) +
              " * " + std::to_string(classes) + " > " + std::to_string(num_features) + ")");
}

namespace {

LabeledDataset draw_split(const ArtificialSpec& spec, std::size_t count, Split split, Rng rng) {
  LabeledDataset data;
  data.features = spec.num_features;
  data.classes = spec.classes;
  data.split = split;
  data.seed = spec.seed;
  data.examples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Example ex;
    ex.label = static_cast<std::uint32_t>(rng.below(spec.classes));
    ex.presence = Bitset(spec.num_features);
    const std::size_t lo = ex.label * spec.unique_per_class;
    const std::size_t hi = lo + spec.unique_per_class;
    for (std::size_t f = 0; f < spec.num_features; ++f) {
      const bool prototype = f >= lo && f < hi;
      ex.presence.set(f, prototype != rng.bernoulli(spec.noise));
    }
    data.examples.push_back(std::move(ex));
  }
  return data;
}

}  // namespace

DatasetPair gen_artificial(const ArtificialSpec& spec) {
  spec.validate();
  const Rng root(spec.seed);
  return {draw_split(spec, spec.train_n, Split::Train, root.split(stream_id("artificial/train"))),
          draw_split(spec, spec.test_n, Split::Test, root.split(stream_id("artificial/test")))};
}

void write_artificial_spec_csv(const ArtificialSpec& spec, std::ostream& out) {
  out << "num_features,train_n,test_n,noise,unique_per_class,classes,seed\n"
      << spec.num_features << ',' << spec.train_n << ',' << spec.test_n << ',' << spec.noise << ','
      << spec.unique_per_class << ',' << spec.classes << ',' << spec.seed << '\n';
}

LabeledText parse_labeled_text(std::istream& in, const std::string& source) {
  LabeledText out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(source + ":" + std::to_string(line_no) + ": missing tab between label and text");
    }
    std::uint32_t label = 0;
    const char* first = line.data();
    const char* last = line.data() + tab;
    auto [ptr, ec] = std::from_chars(first, last, label);
    if (ec != std::errc() || ptr != last || first == last) {
      throw DataError(source + ":" + std::to_string(line_no) + ": malformed label '" + line.substr(0, tab) + "'");
    }
    out.labels.push_back(label);
    out.documents.push_back(tokenize(std::string_view(line).substr(tab + 1)));
  }
  if (out.documents.empty()) std::cerr << "warning: " << source << " contains no documents\n";
  return out;
}

LabeledText load_labeled_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return parse_labeled_text(in, path);
}

std::vector<Document> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<Document> docs;
  std::string line;
  while (std::getline(in, line)) {
    auto doc = tokenize(line);
    if (!doc.empty()) docs.push_back(std::move(doc));
  }
  return docs;
}

LabeledDataset to_dataset(const LabeledText& text, const Vocabulary& vocab, Split split) {
  LabeledDataset data;
  data.features = vocab.size();
  data.split = split;
  std::uint32_t max_label = 0;
  for (std::size_t i = 0; i < text.documents.size(); ++i) {
    data.examples.push_back({binarize(text.documents[i], vocab), text.labels[i]});
    max_label = std::max(max_label, text.labels[i]);
  }
  data.classes = text.documents.empty() ? 0 : max_label + 1;
  return data;
}

// Dataset cache layout, all integers little-endian:
//   char[8] magic "TMRBDATA", u32 version (1)
//   u32 m, u32 classes, u64 count, u64 seed, u8 split
//   count x { u32 label, u64 presence_words[ceil(m/64)] }
namespace {

constexpr char kDataMagic[8] = {'T', 'M', 'R', 'B', 'D', 'A', 'T', 'A'};
constexpr std::uint32_t kDataVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFFU);
  out.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw DataError("dataset cache truncated");
  std::uint64_t u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(u);
}

}  // namespace

void save_dataset(const LabeledDataset& data, std::ostream& out) {
  out.write(kDataMagic, sizeof(kDataMagic));
  put<std::uint32_t>(out, kDataVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data.features));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data.classes));
  put<std::uint64_t>(out, data.examples.size());
  put<std::uint64_t>(out, data.seed);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(data.split));
  for (const auto& ex : data.examples) {
    put<std::uint32_t>(out, ex.label);
    for (auto w : ex.presence.words()) put<std::uint64_t>(out, w);
  }
  if (!out) throw DataError("failed writing dataset cache");
}

LabeledDataset load_dataset(std::istream& in) {
  char magic[sizeof(kDataMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kDataMagic, sizeof(magic)) != 0) {
    throw DataError("not a dataset cache (bad magic)");
  }
  if (get<std::uint32_t>(in) != kDataVersion) throw DataError("unsupported dataset cache version");
  LabeledDataset data;
  data.features = get<std::uint32_t>(in);
  data.classes = get<std::uint32_t>(in);
  const auto count = get<std::uint64_t>(in);
  data.seed = get<std::uint64_t>(in);
  data.split = static_cast<Split>(get<std::uint8_t>(in));
  data.examples.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Example ex;
    ex.label = get<std::uint32_t>(in);
    if (ex.label >= data.classes) throw DataError("dataset cache label out of range at example " + std::to_string(i));
    ex.presence = Bitset(data.features);
    for (auto& w : ex.presence.words()) w = get<std::uint64_t>(in);
    ex.presence.words().back() &= ex.presence.tail_mask();
    data.examples.push_back(std::move(ex));
  }
  return data;
}

void save_dataset(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  save_dataset(data, out);
}

LabeledDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset cache " + path);
  return load_dataset(in);
}

std::vector<Document> gen_topic_corpus(const TopicCorpusSpec& spec) {
  require(spec.documents >= 1 && spec.topics >= 1 && spec.words_per_topic >= 1 && spec.doc_length >= 1,
          "topic corpus: counts must be >= 1");
  require(spec.topic_share >= 0.0 && spec.topic_share <= 1.0, "topic corpus: topic_share must be in [0, 1]");
  require(spec.background_words >= 1 || spec.topic_share == 1.0, "topic corpus: background_words must be >= 1");
  Rng rng(spec.seed, stream_id("topic-corpus"));
  std::vector<Document> docs;
  docs.reserve(spec.documents);
  for (std::size_t d = 0; d < spec.documents; ++d) {
    const auto topic = rng.below(spec.topics);
    Document doc;
    for (std::size_t i = 0; i < spec.doc_length; ++i) {
      if (rng.bernoulli(spec.topic_share)) {
        doc.push_back("t" + std::to_string(topic) + "x" + std::to_string(rng.below(spec.words_per_topic)));
      } else {
        doc.push_back("w" + std::to_string(rng.below(spec.background_words)));
      }
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace tmrbe
