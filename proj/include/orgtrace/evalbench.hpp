#pragma once

// Scoring of attribution techniques against a ground truth. Every domain has
// a holder, so there are no true negatives: a missing answer is a false
// negative.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orgtrace {

struct RoiResult;

struct GroundTruthEntry {
  std::string domain;
  std::string expected_org;
  std::optional<std::string> notes;
};

enum class Outcome { TP, FP, FN };
std::string_view outcome_name(Outcome outcome);

struct EvalMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  // Ratios in [0, 1]; absent when the denominator is zero.
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

// Normalized equality, or one normalized form containing the other as a
// contiguous token run.
bool org_matches(std::string_view found, std::string_view expected);

Outcome judge(const std::optional<std::string>& organization, const GroundTruthEntry& truth);

// Throws Error{AllZero}.
EvalMetrics compute_metrics(std::size_t tp, std::size_t fp, std::size_t fn);

// Percentage with two decimals ("95.71%"), or "n/a".
std::string format_percent(const std::optional<double>& ratio);

// domain<TAB>expected_org[<TAB>notes]; '#' comments allowed.
// Throws Error{FormatError} with the line number.
std::vector<GroundTruthEntry> parse_truth(std::istream& in);

struct TechniqueEvaluation {
  EvalMetrics metrics;
  std::vector<std::pair<std::string, Outcome>> outcomes;  // result order
};

// Throws MissingTruth, AllZero.
TechniqueEvaluation evaluate_results(const std::vector<RoiResult>& results,
                                     const std::vector<GroundTruthEntry>& truth);
// Reads result records (one JSON object per line). Throws FormatError too.
TechniqueEvaluation evaluate_technique(std::istream& results, std::istream& truth);

std::string render_metrics_header();
std::string render_metrics_row(std::string_view label, const EvalMetrics& metrics);
std::string metrics_json(std::string_view label, const TechniqueEvaluation& evaluation);

}  // namespace orgtrace
