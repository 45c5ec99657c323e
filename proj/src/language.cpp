#include "orgtrace/language.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "orgtrace/embedded.hpp"
#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

// Letters lowercased, bytes of multi-byte sequences kept, everything else a
// single space; padded so word edges form trigrams.
std::string fold(std::string_view s) {
  std::string out = " ";
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80) {
      out.push_back(ch);
    } else if (std::isalpha(c)) {
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (out.back() != ' ') {
      out.push_back(' ');
    }
  }
  if (out.back() != ' ') out.push_back(' ');
  return out;
}

std::unordered_map<std::string, double> trigrams(std::string_view s) {
  std::unordered_map<std::string, double> freq;
  const auto f = fold(s);
  for (std::size_t i = 0; i + 3 <= f.size(); ++i) freq[f.substr(i, 3)] += 1.0;
  return freq;
}

double norm_of(const std::unordered_map<std::string, double>& freq) {
  double sum = 0.0;
  for (const auto& [k, v] : freq) sum += v * v;
  return std::sqrt(sum);
}

std::size_t code_points(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace

LanguageProfiles LanguageProfiles::from_samples(const std::map<std::string, std::string>& samples) {
  if (samples.empty()) throw Error(Errc::ConfigError, "no language samples");
  LanguageProfiles out;
  for (const auto& [lang, sample] : samples) {
    Profile p;
    p.freq = trigrams(sample);
    p.norm = norm_of(p.freq);
    if (p.norm == 0.0) throw Error(Errc::ConfigError, "language sample '" + lang + "' has no letters");
    out.profiles_.emplace(lang, std::move(p));
  }
  return out;
}

const LanguageProfiles& LanguageProfiles::bundled() {
  static const LanguageProfiles profiles = [] {
    std::map<std::string, std::string> samples;
    for (const auto& f : embedded_files_under("lang/")) {
      auto name = f.name.substr(5);
      if (!name.ends_with(".txt")) continue;
      samples.emplace(std::string(name.substr(0, name.size() - 4)), std::string(f.bytes));
    }
    return from_samples(samples);
  }();
  return profiles;
}

std::map<std::string, double> LanguageProfiles::similarities(std::string_view input) const {
  const auto freq = trigrams(input);
  const double norm = norm_of(freq);
  std::map<std::string, double> out;
  for (const auto& [lang, p] : profiles_) {
    double dot = 0.0;
    for (const auto& [g, v] : freq) {
      if (auto it = p.freq.find(g); it != p.freq.end()) dot += v * it->second;
    }
    out[lang] = norm == 0.0 ? 0.0 : dot / (norm * p.norm);
  }
  return out;
}

LanguageGuess LanguageProfiles::detect(std::string_view input, double margin) const {
  const auto t = text::trim(input);
  if (code_points(t) < kMinChars) {
    throw Error(Errc::TooShort, "language detection needs at least " + std::to_string(kMinChars) + " characters");
  }
  const auto sims = similarities(t);
  std::string best;
  double best_sim = -1.0;
  double second = -1.0;
  for (const auto& [lang, sim] : sims) {
    if (sim > best_sim) {
      second = best_sim;
      best_sim = sim;
      best = lang;
    } else if (sim > second) {
      second = sim;
    }
  }
  if (sims.size() > 1 && best_sim - second < margin) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "top two languages within %.3f", best_sim - second);
    throw Error(Errc::Indeterminate, buf);
  }
  return LanguageGuess{best, best_sim};
}

}  // namespace orgtrace
