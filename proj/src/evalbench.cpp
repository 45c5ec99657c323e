#include "orgtrace/evalbench.hpp"

#include <cstdio>
#include <istream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "orgtrace/domain.hpp"
#include "orgtrace/error.hpp"
#include "orgtrace/resolver.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

std::vector<std::string> org_tokens(std::string_view name) {
  std::string key;
  try {
    key = normalize_org(name).text;
  } catch (const Error&) {
    key = text::collapse_whitespace(text::lower(name));
  }
  std::vector<std::string> out;
  for (auto t : text::split(key, ' ')) {
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

bool contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<long>(i))) return true;
  }
  return false;
}

nlohmann::ordered_json ratio_json(const std::optional<double>& r) {
  return r ? nlohmann::ordered_json(*r) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::TP: return "TP";
    case Outcome::FP: return "FP";
    case Outcome::FN: return "FN";
  }
  return "FN";
}

bool org_matches(std::string_view found, std::string_view expected) {
  const auto a = org_tokens(found);
  const auto b = org_tokens(expected);
  if (a.empty() || b.empty()) return false;
  return a == b || contains_run(a, b) || contains_run(b, a);
}

Outcome judge(const std::optional<std::string>& organization, const GroundTruthEntry& truth) {
  if (!organization || text::trim(*organization).empty()) return Outcome::FN;
  return org_matches(*organization, truth.expected_org) ? Outcome::TP : Outcome::FP;
}

EvalMetrics compute_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp + fp + fn == 0) throw Error(Errc::AllZero, "no results to score");
  EvalMetrics m{tp, fp, fn, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  const auto d = [](std::size_t x) { return static_cast<double>(x); };
  m.accuracy = d(tp) / d(tp + fp + fn);
  if (tp + fp > 0) m.precision = d(tp) / d(tp + fp);
  if (tp + fn > 0) m.recall = d(tp) / d(tp + fn);
  if (m.precision && m.recall) {
    const double s = *m.precision + *m.recall;
    m.f1 = s == 0.0 ? 0.0 : 2.0 * *m.precision * *m.recall / s;
  }
  return m;
}

std::string format_percent(const std::optional<double>& ratio) {
  if (!ratio) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", *ratio * 100.0);
  return buf;
}

std::vector<GroundTruthEntry> parse_truth(std::istream& in) {
  std::vector<GroundTruthEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() < 2 || cols.size() > 3 || text::trim(cols[0]).empty() || text::trim(cols[1]).empty()) {
      throw Error(Errc::FormatError, "truth line " + std::to_string(lineno) + ": expected domain<TAB>organization");
    }
    GroundTruthEntry e;
    e.domain = text::lower(text::trim(cols[0]));
    e.expected_org = std::string(text::trim(cols[1]));
    if (cols.size() == 3 && !text::trim(cols[2]).empty()) e.notes = std::string(text::trim(cols[2]));
    out.push_back(std::move(e));
  }
  return out;
}

TechniqueEvaluation evaluate_results(const std::vector<RoiResult>& results,
                                     const std::vector<GroundTruthEntry>& truth) {
  std::unordered_map<std::string, const GroundTruthEntry*> by_domain;
  for (const auto& e : truth) by_domain.emplace(e.domain, &e);
  TechniqueEvaluation ev;
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& r : results) {
    auto it = by_domain.find(r.input_fqdn);
    if (it == by_domain.end() && !r.registrable_domain.empty()) it = by_domain.find(r.registrable_domain);
    if (it == by_domain.end()) throw Error(Errc::MissingTruth, "no ground truth for " + r.input_fqdn);
    const auto o = judge(r.organization, *it->second);
    ++counts[static_cast<int>(o)];
    ev.outcomes.emplace_back(r.input_fqdn, o);
  }
  ev.metrics = compute_metrics(counts[0], counts[1], counts[2]);
  return ev;
}

TechniqueEvaluation evaluate_technique(std::istream& results, std::istream& truth) {
  const auto entries = parse_truth(truth);
  std::vector<RoiResult> parsed;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(results, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      parsed.push_back(parse_record_line(line));
    } catch (const Error& e) {
      throw Error(Errc::FormatError, "results line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return evaluate_results(parsed, entries);
}

std::string render_metrics_row(std::string_view label, const EvalMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-22s %4zu %4zu %4zu  %9s %9s %9s %9s", std::string(label).c_str(), m.tp, m.fp,
                m.fn, format_percent(m.accuracy).c_str(), format_percent(m.precision).c_str(),
                format_percent(m.recall).c_str(), format_percent(m.f1).c_str());
  return buf;
}

std::string render_metrics_header() {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-22s %4s %4s %4s  %9s %9s %9s %9s", "technique", "tp", "fp", "fn", "accuracy",
                "precision", "recall", "f1");
  return buf;
}

std::string metrics_json(std::string_view label, const TechniqueEvaluation& ev) {
  const auto& m = ev.metrics;
  nlohmann::ordered_json j;
  j["technique"] = label;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  j["accuracy"] = ratio_json(m.accuracy);
  j["precision"] = ratio_json(m.precision);
  j["recall"] = ratio_json(m.recall);
  j["f1"] = ratio_json(m.f1);
  j["formatted"] = {{"accuracy", format_percent(m.accuracy)},
                    {"precision", format_percent(m.precision)},
                    {"recall", format_percent(m.recall)},
                    {"f1", format_percent(m.f1)}};
  auto outcomes = nlohmann::ordered_json::array();
  for (const auto& [domain, o] : ev.outcomes) outcomes.push_back({{"domain", domain}, {"outcome", outcome_name(o)}});
  j["outcomes"] = std::move(outcomes);
  return j.dump();
}

}  // namespace orgtrace
