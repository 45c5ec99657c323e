#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>

namespace orgtrace {

struct LanguageGuess {
  std::string language;
  double confidence = 0.0;  // cosine similarity to the winning profile
};

// Character-trigram frequency profiles compared by cosine similarity.
class LanguageProfiles {
 public:
  static constexpr std::size_t kMinChars = 50;

  static LanguageProfiles from_samples(const std::map<std::string, std::string>& samples);
  // en, es, fr, de, pt, it built from the bundled sample texts.
  static const LanguageProfiles& bundled();

  // Throws Error{TooShort} or Error{Indeterminate}.
  LanguageGuess detect(std::string_view text, double margin = 0.02) const;

  // Similarity of `text` to every profile, for diagnostics.
  std::map<std::string, double> similarities(std::string_view text) const;

 private:
  struct Profile {
    std::unordered_map<std::string, double> freq;
    double norm = 0.0;
  };
  std::map<std::string, Profile> profiles_;
};

}  // namespace orgtrace
