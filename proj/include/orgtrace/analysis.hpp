#pragma once

#include <string>
#include <string_view>

#include "orgtrace/classifier.hpp"
#include "orgtrace/controller.hpp"
#include "orgtrace/error.hpp"
#include "orgtrace/language.hpp"
#include "orgtrace/policy_text.hpp"

namespace orgtrace {

enum class AnalysisStage { ExtractText, Language, Classify, SelectParagraphs, ExtractController };
std::string_view analysis_stage_name(AnalysisStage stage);

class AnalysisError : public Error {
 public:
  AnalysisError(AnalysisStage stage, Errc code, const std::string& message)
      : Error(code, message), stage_(stage) {}
  AnalysisStage stage() const noexcept { return stage_; }

 private:
  AnalysisStage stage_;
};

struct AnalysisComponents {
  const LanguageProfiles& languages;
  const PolicyClassifier& classifier;
  const ControllerLexicon& lexicon;
  const EntityRules& rules;
  const ControllerExtractor& extractor;
  double language_margin = 0.02;
};

struct PolicyAnalysis {
  PolicyText text;
  LanguageGuess language;
  Classification classification;
  ControllerExtraction extraction;
};

// extract -> language -> classify -> select -> extract; the first failing
// stage is reported as AnalysisError (NotEnglish, NotAPolicy, ...).
PolicyAnalysis analyze_page(std::string_view page, std::string url, const AnalysisComponents& components);
ControllerExtraction analyze(std::string_view page, std::string url, const AnalysisComponents& components);

}  // namespace orgtrace
