#pragma once

// Controller-bearing paragraph selection and rule-based organization
// extraction.

#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "orgtrace/domain.hpp"
#include "orgtrace/policy_text.hpp"

namespace orgtrace {

class ControllerLexicon {
 public:
  explicit ControllerLexicon(std::vector<std::pair<std::string, double>> keywords);
  static ControllerLexicon parse(std::string_view content);
  static const ControllerLexicon& bundled();

  const std::vector<std::pair<std::string, double>>& keywords() const noexcept { return keywords_; }
  // Sum of weights of the keywords present in `paragraph`. Multi-word
  // keywords match as substrings, single words on token boundaries.
  double score(std::string_view paragraph) const;

 private:
  std::vector<std::pair<std::string, double>> keywords_;
};

struct ScoredParagraph {
  std::size_t index = 0;  // position in PolicyText::paragraphs
  std::string text;
  double score = 0.0;
};

// Paragraphs with score > 0, best first (stable), at most `cap`.
// Throws Error{NoQualifyingParagraphs}.
std::vector<ScoredParagraph> select_paragraphs(const PolicyText& policy, const ControllerLexicon& lexicon,
                                               std::size_t cap = 5);

struct EntityRules {
  DesignatorGazetteer designators;
  std::vector<std::string> triggers;           // lowercase phrases
  std::unordered_set<std::string> generic;     // normalized spans never reported
  std::unordered_set<std::string> known_orgs;  // normalized third-party names

  static const EntityRules& bundled();
  // Empty paths select the bundled lists.
  static EntityRules load(const std::string& designators_path, const std::string& triggers_path,
                          const std::string& generic_path, const std::string& known_orgs_path);
};

struct EntityCandidate {
  std::string text;
  std::size_t paragraph_rank = 0;   // rank among the selected paragraphs
  std::size_t paragraph_index = 0;  // index in the policy
  std::size_t offset = 0;           // byte offset inside the paragraph
  std::string trigger;              // trigger phrase directly before, if any
  bool alias_pronoun = false;       // followed by ("...", "we" ...)
  bool legal_designator = false;
  int evidence = 0;                 // trigger + alias + designator points
  int score = 0;                    // evidence + paragraph-rank bonus
};

// Capitalized spans of one paragraph with their evidence, before generic and
// pronoun filtering is applied. Ranks and indices are left at 0.
std::vector<EntityCandidate> generate_candidates(std::string_view paragraph, const EntityRules& rules);

// True when a candidate is pronoun-only or on the generic list.
bool is_excluded_candidate(std::string_view text, const EntityRules& rules);

struct ControllerExtraction {
  std::string controller;
  std::vector<EntityCandidate> candidates;
  std::size_t paragraph_index = 0;
};

class ControllerExtractor {
 public:
  virtual ~ControllerExtractor() = default;
  // Throws Error{NoController}.
  virtual ControllerExtraction extract(std::span<const ScoredParagraph> paragraphs,
                                       const EntityRules& rules) const = 0;
};

class RuleBasedExtractor final : public ControllerExtractor {
 public:
  ControllerExtraction extract(std::span<const ScoredParagraph> paragraphs,
                               const EntityRules& rules) const override;
};

ControllerExtraction extract_controller(std::span<const ScoredParagraph> paragraphs, const EntityRules& rules);

}  // namespace orgtrace
