#pragma once

// Policy-vs-other gate: tf-idf unigrams and a linear model fitted by plain
// SGD on the modified Huber loss with an L2 penalty.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace orgtrace {

struct ClassifierConfig {
  double alpha = 1e-3;
  int epochs = 30;
  std::uint64_t seed = 42;
  std::size_t max_vocabulary = 20000;

  void validate() const;
  bool operator==(const ClassifierConfig&) const = default;
};

struct LabeledText {
  std::string text;
  bool is_policy = false;
};

struct Classification {
  bool is_policy = false;
  double score = 0.0;
};

// Casefolded tokens of two or more word characters.
std::vector<std::string> tokenize(std::string_view text);

using SparseVector = std::vector<std::pair<std::size_t, double>>;

class PolicyClassifier {
 public:
  // Throws Error{EmptyText}.
  Classification classify(std::string_view text) const;
  SparseVector vectorize(std::string_view text) const;

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  // Throws Error{FormatError}.
  static PolicyClassifier load(std::istream& in);
  static PolicyClassifier load(const std::filesystem::path& path);

  const ClassifierConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<double>& idf() const noexcept { return idf_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  double threshold() const noexcept { return threshold_; }

  bool operator==(const PolicyClassifier&) const = default;

 private:
  friend PolicyClassifier train_classifier(std::span<const LabeledText>, const ClassifierConfig&);
  void rebuild_index();

  ClassifierConfig config_;
  std::vector<std::string> terms_;  // sorted; index = feature id
  std::vector<double> idf_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  double threshold_ = 0.0;
  std::unordered_map<std::string, std::size_t> index_;
};

// Throws EmptyCorpus, SingleClassCorpus, InvalidArgument.
PolicyClassifier train_classifier(std::span<const LabeledText> corpus, const ClassifierConfig& config);

// Directory holding labels.tsv (path<TAB>policy|other) and the text files.
// Throws Error{FormatError} or Error{IoError}.
std::vector<LabeledText> load_corpus(const std::filesystem::path& dir);
// Bundled training split.
std::vector<LabeledText> bundled_corpus(std::string_view split = "train");

// Model trained once from the bundled corpus with the default config.
const PolicyClassifier& bundled_classifier();

}  // namespace orgtrace
