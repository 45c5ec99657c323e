#include "orgtrace/analysis.hpp"

namespace orgtrace {

std::string_view analysis_stage_name(AnalysisStage stage) {
  switch (stage) {
    case AnalysisStage::ExtractText: return "extract_text";
    case AnalysisStage::Language: return "language";
    case AnalysisStage::Classify: return "classify";
    case AnalysisStage::SelectParagraphs: return "select_paragraphs";
    case AnalysisStage::ExtractController: return "extract_controller";
  }
  return "extract_text";
}

namespace {

template <typename F>
auto run_stage(AnalysisStage stage, F&& f) {
  try {
    return f();
  } catch (const AnalysisError&) {
    throw;
  } catch (const Error& e) {
    throw AnalysisError(stage, e.code(), std::string(analysis_stage_name(stage)) + ": " + e.what());
  }
}

}  // namespace

PolicyAnalysis analyze_page(std::string_view page, std::string url, const AnalysisComponents& c) {
  PolicyAnalysis out;
  out.text = run_stage(AnalysisStage::ExtractText, [&] { return extract_text(page, std::move(url)); });
  out.language = run_stage(AnalysisStage::Language, [&] {
    auto guess = c.languages.detect(out.text.full_text, c.language_margin);
    if (guess.language != "en") {
      throw Error(Errc::NotEnglish, "page language is '" + guess.language + "'");
    }
    return guess;
  });
  out.classification = run_stage(AnalysisStage::Classify, [&] {
    auto verdict = c.classifier.classify(out.text.full_text);
    if (!verdict.is_policy) throw Error(Errc::NotAPolicy, "classifier score " + std::to_string(verdict.score));
    return verdict;
  });
  const auto selected =
      run_stage(AnalysisStage::SelectParagraphs, [&] { return select_paragraphs(out.text, c.lexicon); });
  out.extraction = run_stage(AnalysisStage::ExtractController, [&] { return c.extractor.extract(selected, c.rules); });
  return out;
}

ControllerExtraction analyze(std::string_view page, std::string url, const AnalysisComponents& components) {
  return analyze_page(page, std::move(url), components).extraction;
}

}  // namespace orgtrace
