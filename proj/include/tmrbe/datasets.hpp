#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tmrbe/bitset.hpp"

namespace tmrbe {

using Document = std::vector<std::string>;

/// Whitespace split, ASCII lowercasing, punctuation stripped. Empty tokens dropped.
Document tokenize(std::string_view text);

/// Tokens ordered by descending corpus frequency, ties alphabetical.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::size_t id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  /// Feature id of a token, or npos when out of vocabulary.
  std::size_t find(std::string_view token) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

Vocabulary build_vocab(std::span<const Document> corpus, std::size_t max_size);

/// Set-of-words presence bitset; out-of-vocabulary tokens are ignored.
Bitset binarize(const Document& doc, const Vocabulary& vocab);

/// Sorted, de-duplicated in-vocabulary feature ids of a document.
std::vector<std::uint32_t> feature_ids(const Document& doc, const Vocabulary& vocab);

enum class Split : std::uint8_t { Train = 0, Test = 1 };

struct Example {
  Bitset presence;
  std::uint32_t label = 0;
  bool operator==(const Example&) const = default;
};

struct LabeledDataset {
  std::size_t features = 0;
  std::size_t classes = 0;
  Split split = Split::Train;
  std::uint64_t seed = 0;
  std::vector<Example> examples;

  bool operator==(const LabeledDataset&) const = default;
};

/// Knobs of the synthetic benchmark. Class c owns features
/// [c*unique_per_class, (c+1)*unique_per_class); an example is its class
/// prototype (owned block set, rest clear) with each bit flipped w.p. noise.
struct ArtificialSpec {
  std::size_t num_features = 200;
  std::size_t train_n = 5000;
  std::size_t test_n = 5000;
  double noise = 0.35;
  std::size_t unique_per_class = 10;
  std::size_t classes = 2;
  std::uint64_t seed = 42;

  void validate() const;
};

struct DatasetPair {
  LabeledDataset train;
  LabeledDataset test;
};

DatasetPair gen_artificial(const ArtificialSpec& spec);

void write_artificial_spec_csv(const ArtificialSpec& spec, std::ostream& out);

/// One `label<TAB>text` line per document. LF and CRLF accepted; blank lines skipped.
struct LabeledText {
  std::vector<Document> documents;
  std::vector<std::uint32_t> labels;
};

LabeledText load_labeled_text(const std::string& path);
LabeledText parse_labeled_text(std::istream& in, const std::string& source = "<stream>");

/// One document per line, unlabeled.
std::vector<Document> load_corpus(const std::string& path);

/// Binarizes labeled text against a vocabulary.
LabeledDataset to_dataset(const LabeledText& text, const Vocabulary& vocab, Split split);

void save_dataset(const LabeledDataset& data, std::ostream& out);
LabeledDataset load_dataset(std::istream& in);
void save_dataset(const LabeledDataset& data, const std::string& path);
LabeledDataset load_dataset(const std::string& path);

/// Small synthetic text corpus: each document draws most tokens from one topic
/// cluster and the rest from shared background words. Token names are
/// "t<topic>x<k>" and "w<k>".
struct TopicCorpusSpec {
  std::size_t documents = 1000;
  std::size_t topics = 8;
  std::size_t words_per_topic = 20;
  std::size_t background_words = 100;
  std::size_t doc_length = 12;
  double topic_share = 0.6;
  std::uint64_t seed = 7;
};

std::vector<Document> gen_topic_corpus(const TopicCorpusSpec& spec);

}  // namespace tmrbe
