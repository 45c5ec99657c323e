#include "orgtrace/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "orgtrace/embedded.hpp"
#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

constexpr std::string_view kModelMagic = "orgtrace-classifier 1";

bool word_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

double modified_huber_dloss(double p, double y) {
  const double z = p * y;
  if (z >= 1.0) return 0.0;
  if (z >= -1.0) return -2.0 * (1.0 - z) * y;
  return -4.0 * y;
}

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_double(std::string_view s) {
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (end == tmp.c_str() || *end != '\0') throw Error(Errc::FormatError, "bad number '" + tmp + "' in model");
  return v;
}

std::uint64_t parse_uint(std::string_view s) {
  const std::string tmp(s);
  char* end = nullptr;
  const auto v = std::strtoull(tmp.c_str(), &end, 10);
  if (end == tmp.c_str() || *end != '\0') throw Error(Errc::FormatError, "bad integer '" + tmp + "' in model");
  return v;
}

// Raw term counts of a document.
std::map<std::string, double> term_counts(std::string_view text) {
  std::map<std::string, double> counts;
  for (auto& t : tokenize(text)) counts[std::move(t)] += 1.0;
  return counts;
}

void l2_normalize(SparseVector& v) {
  double sum = 0.0;
  for (const auto& [i, x] : v) sum += x * x;
  if (sum == 0.0) return;
  const double n = std::sqrt(sum);
  for (auto& [i, x] : v) x /= n;
}

std::vector<LabeledText> corpus_from(const std::function<std::string(const std::string&)>& read,
                                     std::string_view manifest, const std::string& where) {
  std::vector<LabeledText> out;
  std::size_t lineno = 0;
  for (const auto& raw : text::split_lines(manifest)) {
    ++lineno;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 2 || (cols[1] != "policy" && cols[1] != "other")) {
      throw Error(Errc::FormatError, where + " line " + std::to_string(lineno) + ": expected path<TAB>policy|other");
    }
    out.push_back(LabeledText{read(std::string(cols[0])), cols[1] == "policy"});
  }
  return out;
}

}  // namespace

void ClassifierConfig::validate() const {
  if (!(alpha > 0.0)) throw Error(Errc::InvalidArgument, "alpha must be positive");
  if (epochs <= 0) throw Error(Errc::InvalidArgument, "epochs must be positive");
  if (max_vocabulary == 0) throw Error(Errc::InvalidArgument, "max_vocabulary must be positive");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && word_byte(static_cast<unsigned char>(text[j]))) ++j;
    if (j - i >= 2) out.push_back(text::lower(text.substr(i, j - i)));
    i = j;
  }
  return out;
}

void PolicyClassifier::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

SparseVector PolicyClassifier::vectorize(std::string_view text) const {
  SparseVector v;
  for (const auto& [term, count] : term_counts(text)) {
    auto it = index_.find(term);
    if (it == index_.end()) continue;
    v.emplace_back(it->second, count * idf_[it->second]);
  }
  std::sort(v.begin(), v.end());
  l2_normalize(v);
  return v;
}

Classification PolicyClassifier::classify(std::string_view text) const {
  if (text::trim(text).empty()) throw Error(Errc::EmptyText, "cannot classify empty text");
  double score = bias_;
  for (const auto& [i, x] : vectorize(text)) score += weights_[i] * x;
  return Classification{score > threshold_, score};
}

void PolicyClassifier::save(std::ostream& out) const {
  out << kModelMagic << "\n";
  out << "alpha " << hexfloat(config_.alpha) << "\n";
  out << "epochs " << config_.epochs << "\n";
  out << "seed " << config_.seed << "\n";
  out << "max_vocabulary " << config_.max_vocabulary << "\n";
  out << "bias " << hexfloat(bias_) << "\n";
  out << "threshold " << hexfloat(threshold_) << "\n";
  out << "terms " << terms_.size() << "\n";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out << terms_[i] << '\t' << hexfloat(idf_[i]) << '\t' << hexfloat(weights_[i]) << "\n";
  }
}

void PolicyClassifier::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  save(out);
  if (!out) throw Error(Errc::IoError, "cannot write model " + path.string());
}

PolicyClassifier PolicyClassifier::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) throw Error(Errc::FormatError, "not a classifier model");
  PolicyClassifier m;
  auto field = [&](std::string_view name) {
    if (!std::getline(in, line)) throw Error(Errc::FormatError, "truncated model header");
    const auto sp = line.find(' ');
    if (sp == std::string::npos || std::string_view(line).substr(0, sp) != name) {
      throw Error(Errc::FormatError, "expected model field '" + std::string(name) + "'");
    }
    return line.substr(sp + 1);
  };
  m.config_.alpha = parse_double(field("alpha"));
  m.config_.epochs = static_cast<int>(parse_uint(field("epochs")));
  m.config_.seed = parse_uint(field("seed"));
  m.config_.max_vocabulary = parse_uint(field("max_vocabulary"));
  m.bias_ = parse_double(field("bias"));
  m.threshold_ = parse_double(field("threshold"));
  const auto n = parse_uint(field("terms"));
  m.terms_.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw Error(Errc::FormatError, "truncated model vocabulary");
    const auto cols = text::split(line, '\t');
    if (cols.size() != 3) throw Error(Errc::FormatError, "malformed vocabulary line");
    m.terms_.emplace_back(cols[0]);
    m.idf_.push_back(parse_double(cols[1]));
    m.weights_.push_back(parse_double(cols[2]));
  }
  m.rebuild_index();
  return m;
}

PolicyClassifier PolicyClassifier::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read model " + path.string());
  return load(in);
}

PolicyClassifier train_classifier(std::span<const LabeledText> corpus, const ClassifierConfig& config) {
  config.validate();
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "training corpus is empty");
  const auto positives = std::count_if(corpus.begin(), corpus.end(), [](const auto& d) { return d.is_policy; });
  if (positives == 0 || positives == static_cast<long>(corpus.size())) {
    throw Error(Errc::SingleClassCorpus, "training corpus has a single class");
  }

  std::vector<std::map<std::string, double>> counts;
  std::map<std::string, double> total;
  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    counts.push_back(term_counts(doc.text));
    for (const auto& [t, c] : counts.back()) {
      total[t] += c;
      ++df[t];
    }
  }
  if (total.empty()) throw Error(Errc::EmptyCorpus, "training corpus has no tokens");

  // Most frequent terms, ties by term; then lexicographic feature order.
  std::vector<std::pair<std::string, double>> ranked(total.begin(), total.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > config.max_vocabulary) ranked.resize(config.max_vocabulary);

  PolicyClassifier m;
  m.config_ = config;
  for (auto& [t, c] : ranked) m.terms_.push_back(t);
  std::sort(m.terms_.begin(), m.terms_.end());
  const double n = static_cast<double>(corpus.size());
  for (const auto& t : m.terms_) {
    m.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df[t]))) + 1.0);
  }
  m.rebuild_index();

  std::vector<SparseVector> xs;
  std::vector<double> ys;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    SparseVector v;
    for (const auto& [t, c] : counts[d]) {
      if (auto it = m.index_.find(t); it != m.index_.end()) v.emplace_back(it->second, c * m.idf_[it->second]);
    }
    std::sort(v.begin(), v.end());
    l2_normalize(v);
    xs.push_back(std::move(v));
    ys.push_back(corpus[d].is_policy ? 1.0 : -1.0);
  }

  const double alpha = config.alpha;
  const double typw = std::sqrt(1.0 / std::sqrt(alpha));
  const double eta0 = typw / std::max(1.0, modified_huber_dloss(-typw, 1.0));
  const double t0 = 1.0 / (eta0 * alpha);

  std::vector<double> w(m.terms_.size(), 0.0);
  double wscale = 1.0;
  double b = 0.0;
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  double t = 1.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    for (const auto d : order) {
      const auto& x = xs[d];
      double p = 0.0;
      for (const auto& [i, v] : x) p += w[i] * v;
      p = p * wscale + b;
      const double eta = 1.0 / (alpha * (t0 + t - 1.0));
      const double update = -eta * modified_huber_dloss(p, ys[d]);
      if (update != 0.0) {
        for (const auto& [i, v] : x) w[i] += update * v / wscale;
        b += update;
      }
      wscale *= std::max(0.0, 1.0 - eta * alpha);
      if (wscale < 1e-9) {
        for (auto& wi : w) wi *= wscale;
        wscale = 1.0;
      }
      t += 1.0;
    }
  }
  for (auto& wi : w) wi *= wscale;
  m.weights_ = std::move(w);
  m.bias_ = b;
  return m;
}

std::vector<LabeledText> load_corpus(const std::filesystem::path& dir) {
  const auto manifest = text::read_file((dir / "labels.tsv").string());
  return corpus_from([&](const std::string& rel) { return text::read_file((dir / rel).string()); }, manifest,
                     (dir / "labels.tsv").string());
}

std::vector<LabeledText> bundled_corpus(std::string_view split) {
  const std::string prefix = "corpus/" + std::string(split) + "/";
  auto manifest = embedded_file(prefix + "labels.tsv");
  if (!manifest) throw Error(Errc::ConfigError, "no bundled corpus split '" + std::string(split) + "'");
  return corpus_from(
      [&](const std::string& rel) {
        auto f = embedded_file(prefix + rel);
        if (!f) throw Error(Errc::FormatError, "bundled corpus lacks " + rel);
        return std::string(*f);
      },
      *manifest, prefix + "labels.tsv");
}

const PolicyClassifier& bundled_classifier() {
  static const PolicyClassifier model = [] {
    const auto corpus = bundled_corpus("train");
    return train_classifier(corpus, ClassifierConfig{});
  }();
  return model;
}

}  // namespace orgtrace
