#include "orgtrace/controller.hpp"

#include <algorithm>
#include <cctype>

#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

constexpr int kTriggerPoints = 3;
constexpr int kAliasPoints = 3;
constexpr int kDesignatorPoints = 2;

// Words that start a sentence rather than a name.
const std::unordered_set<std::string> kLeadingStopwords = {
    "the", "we",   "welcome", "this",   "our",  "your", "if",    "when", "in",   "for",  "at",
    "by",  "to",   "all",     "any",    "please", "these", "you", "us",  "it",   "as",   "on",
    "an",  "a",    "each",    "such",   "some", "where", "while", "with", "from", "under", "about"};

const std::unordered_set<std::string> kPronouns = {"we", "us", "our", "ours", "you", "your", "i", "me",
                                                   "they", "them", "it", "its", "he", "she"};

const std::unordered_set<std::string_view> kConnectors = {"of", "and", "&"};

// Designators written with a trailing abbreviation period.
const std::unordered_set<std::string> kAbbreviations = {"inc", "corp", "co", "ltd", "llc", "plc", "pty", "bhd",
                                                        "pte", "gmbh", "ag", "sa", "bv", "nv", "srl", "sl"};

struct Word {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive, includes a kept abbreviation period
  bool period = false;  // ends with '.'
};

// Length of a UTF-8 punctuation sequence at s[i] (curly quotes, guillemets,
// dashes, nbsp), or 0.
std::size_t utf8_punct(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (c == 0xE2 && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x80) return 3;
  if (c == 0xC2 && i + 1 < s.size()) {
    const auto d = static_cast<unsigned char>(s[i + 1]);
    if (d == 0xAB || d == 0xBB || d == 0xA0) return 2;
  }
  return 0;
}

bool word_char(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (c >= 0x80) return utf8_punct(s, i) == 0;
  return std::isalnum(c) || c == '-' || c == '&';
}

bool capitalized(std::string_view w) {
  if (w.empty()) return false;
  const auto c = static_cast<unsigned char>(w[0]);
  if (std::isupper(c)) return true;
  // Latin-1 capitals U+00C0..U+00DE.
  if (c == 0xC3 && w.size() > 1) {
    const auto d = static_cast<unsigned char>(w[1]);
    return d >= 0x80 && d <= 0x9E && d != 0x97;
  }
  return false;
}

std::string bare_lower(std::string_view w) {
  std::string out;
  for (char c : w) {
    if (c != '.') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// Length of a web suffix ("com", "io") starting at `at` and ending the word, or 0.
std::size_t web_suffix_at(std::string_view p, std::size_t at) {
  static const std::unordered_set<std::string_view> suffixes = {"com", "net", "org", "io", "co", "ai", "app", "me", "tv"};
  std::size_t n = 0;
  while (at + n < p.size() && std::islower(static_cast<unsigned char>(p[at + n]))) ++n;
  if (at + n < p.size() && (std::isalnum(static_cast<unsigned char>(p[at + n])) || p[at + n] == '-')) return 0;
  return suffixes.contains(p.substr(at, n)) ? n : 0;
}

std::vector<Word> split_words(std::string_view p) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < p.size()) {
    if (!word_char(p, i)) {
      const auto n = static_cast<unsigned char>(p[i]) >= 0x80 ? std::max<std::size_t>(1, utf8_punct(p, i)) : 1;
      i += n;
      continue;
    }
    Word w;
    w.begin = i;
    while (i < p.size()) {
      if (word_char(p, i)) {
        ++i;
      } else if (p[i] == '.' && i + 1 < p.size() && std::isalpha(static_cast<unsigned char>(p[i + 1])) &&
                 i > w.begin && std::isalpha(static_cast<unsigned char>(p[i - 1])) && i - w.begin <= 2) {
        ++i;  // dotted abbreviation such as S.A or U.S
      } else if (p[i] == '.' && i - w.begin >= 2 && web_suffix_at(p, i + 1)) {
        i += 1 + web_suffix_at(p, i + 1);  // "King.com"
      } else {
        break;
      }
    }
    w.end = i;
    // Strip trailing hyphens.
    while (w.end > w.begin && p[w.end - 1] == '-') --w.end;
    if (w.end == w.begin) continue;
    if (i < p.size() && p[i] == '.') {
      w.period = true;
      const auto token = p.substr(w.begin, w.end - w.begin);
      if (token.find('.') != std::string_view::npos || kAbbreviations.contains(bare_lower(token))) {
        w.end = i + 1;
        ++i;
      }
    }
    words.push_back(w);
  }
  return words;
}

// Characters between two words are plain spaces.
bool only_spaces(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

std::string ascii_words_lower(std::string_view s) {
  std::string out;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    out.push_back(c < 0x80 && std::isalnum(c) ? static_cast<char>(std::tolower(c)) : ' ');
  }
  return " " + text::collapse_whitespace(out) + " ";
}

bool ends_with_phrase(std::string_view before, std::string_view phrase) {
  const auto b = ascii_words_lower(before);
  const std::string needle = " " + std::string(phrase) + " ";
  return b.size() >= needle.size() && b.compare(b.size() - needle.size(), needle.size(), needle) == 0;
}

std::string span_key(std::string_view s) {
  std::string out;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '.' || c == '\'') continue;
    out.push_back(c >= 0x80 || std::isalnum(c) || c == '&' ? static_cast<char>(std::tolower(c)) : ' ');
  }
  return text::collapse_whitespace(out);
}

}  // namespace

ControllerLexicon::ControllerLexicon(std::vector<std::pair<std::string, double>> keywords) {
  for (auto& [k, w] : keywords) {
    auto key = text::lower(text::trim(k));
    if (key.empty()) continue;
    if (!(w > 0)) throw Error(Errc::ConfigError, "controller keyword '" + key + "' needs a positive weight");
    keywords_.emplace_back(std::move(key), w);
  }
  if (keywords_.empty()) throw Error(Errc::ConfigError, "controller lexicon is empty");
}

ControllerLexicon ControllerLexicon::parse(std::string_view content) {
  std::vector<std::pair<std::string, double>> keywords;
  for (const auto& line : text::config_lines(content)) {
    const auto cols = text::split(line, '\t');
    if (cols.size() != 2) throw Error(Errc::ConfigError, "malformed controller lexicon line '" + line + "'");
    keywords.emplace_back(std::string(cols[0]), std::stod(std::string(cols[1])));
  }
  return ControllerLexicon(std::move(keywords));
}

const ControllerLexicon& ControllerLexicon::bundled() {
  static const ControllerLexicon lexicon = parse(text::load_resource("", "controller_lexicon.tsv"));
  return lexicon;
}

double ControllerLexicon::score(std::string_view paragraph) const {
  const auto folded = text::lower(paragraph);
  const auto words = ascii_words_lower(paragraph);
  double total = 0.0;
  for (const auto& [k, w] : keywords_) {
    const bool hit = k.find(' ') != std::string::npos ? folded.find(k) != std::string::npos
                                                       : words.find(" " + k + " ") != std::string::npos;
    if (hit) total += w;
  }
  return total;
}

std::vector<ScoredParagraph> select_paragraphs(const PolicyText& policy, const ControllerLexicon& lexicon,
                                               std::size_t cap) {
  std::vector<ScoredParagraph> scored;
  for (std::size_t i = 0; i < policy.paragraphs.size(); ++i) {
    const double s = lexicon.score(policy.paragraphs[i]);
    if (s > 0) scored.push_back({i, policy.paragraphs[i], s});
  }
  if (scored.empty()) throw Error(Errc::NoQualifyingParagraphs, "no paragraph mentions a controller keyword");
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  if (scored.size() > cap) scored.resize(cap);
  return scored;
}

const EntityRules& EntityRules::bundled() {
  static const EntityRules rules = load("", "", "", "");
  return rules;
}

EntityRules EntityRules::load(const std::string& designators_path, const std::string& triggers_path,
                              const std::string& generic_path, const std::string& known_orgs_path) {
  EntityRules rules{
      designators_path.empty() ? DesignatorGazetteer::bundled()
                               : DesignatorGazetteer::parse(text::read_file(designators_path)),
      {},
      {},
      {}};
  for (auto& t : text::config_lines(text::load_resource(triggers_path, "entity_triggers.txt"))) {
    rules.triggers.push_back(text::lower(t));
  }
  if (rules.triggers.empty()) throw Error(Errc::ConfigError, "entity trigger list is empty");
  for (auto& g : text::config_lines(text::load_resource(generic_path, "generic_blocklist.txt"))) {
    rules.generic.insert(span_key(g));
  }
  for (auto& k : text::config_lines(text::load_resource(known_orgs_path, "known_orgs.txt"))) {
    rules.known_orgs.insert(span_key(k));
  }
  return rules;
}

namespace {

int evidence_points(const EntityCandidate& c) {
  return (c.trigger.empty() ? 0 : kTriggerPoints) + (c.alias_pronoun ? kAliasPoints : 0) +
         (c.legal_designator ? kDesignatorPoints : 0);
}

// First quoted term inside an alias parenthesis, without the quotes.
std::string quoted_term(std::string_view inside) {
  static const std::string_view opens[] = {"\xE2\x80\x9C", "\"", "\xE2\x80\x98", "'"};
  static const std::string_view closes[] = {"\xE2\x80\x9D", "\"", "\xE2\x80\x99", "'"};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto b = inside.find(opens[k]);
    if (b == std::string_view::npos) continue;
    const auto start = b + opens[k].size();
    const auto e = inside.find(closes[k], start);
    if (e == std::string_view::npos) continue;
    return std::string(text::trim(inside.substr(start, e - start)));
  }
  return {};
}

// `name` begins with `word` followed by a non-word character or the end.
bool starts_with_word(std::string_view name, std::string_view word) {
  if (word.empty() || !text::starts_with_icase(name, word)) return false;
  return name.size() == word.size() || !std::isalnum(static_cast<unsigned char>(name[word.size()]));
}

}  // namespace

std::vector<EntityCandidate> generate_candidates(std::string_view p, const EntityRules& rules) {
  const auto words = split_words(p);
  auto token = [&](const Word& w) { return p.substr(w.begin, w.end - w.begin); };
  auto is_designator = [&](const Word& w) { return rules.designators.contains(bare_lower(token(w))); };

  std::vector<EntityCandidate> out;
  std::size_t i = 0;
  while (i < words.size()) {
    if (!capitalized(token(words[i]))) {
      ++i;
      continue;
    }
    std::size_t first = i;
    std::size_t last = i;
    std::size_t j = i + 1;
    while (!words[last].period && j < words.size()) {
      const auto gap = p.substr(words[last].end, words[j].begin - words[last].end);
      const auto tok = token(words[j]);
      if (only_spaces(gap)) {
        const bool digit = std::isdigit(static_cast<unsigned char>(tok[0])) != 0;
        if (capitalized(tok) || digit || is_designator(words[j])) {
          last = j++;
          continue;
        }
        if (kConnectors.contains(text::lower(tok)) && j + 1 < words.size() && !words[j].period &&
            only_spaces(p.substr(words[j].end, words[j + 1].begin - words[j].end)) &&
            capitalized(token(words[j + 1]))) {
          last = j + 1;
          j += 2;
          continue;
        }
      } else if (text::trim(gap) == "," && is_designator(words[j])) {
        last = j++;  // "Example, Inc."
        continue;
      }
      break;
    }
    i = last + 1;

    while (first < last && kLeadingStopwords.contains(text::lower(token(words[first])))) ++first;
    if (first == last && kLeadingStopwords.contains(text::lower(token(words[first])))) continue;

    EntityCandidate c;
    c.offset = words[first].begin;
    c.text = std::string(p.substr(words[first].begin, words[last].end - words[first].begin));
    c.legal_designator = last > first && is_designator(words[last]);

    auto before = text::trim(p.substr(0, c.offset));
    if (before.size() >= 3 && text::iequals(before.substr(before.size() - 3), "the") &&
        (before.size() == 3 || !std::isalnum(static_cast<unsigned char>(before[before.size() - 4])))) {
      before = before.substr(0, before.size() - 3);
    }
    for (const auto& t : rules.triggers) {
      if (ends_with_phrase(before, t)) {
        c.trigger = t;
        break;
      }
    }

    auto after = p.substr(words[last].end);
    auto rest = text::trim(after);
    if (!rest.empty() && rest.front() == '(') {
      const auto close = rest.find(')');
      const auto inside = rest.substr(1, close == std::string_view::npos ? std::string_view::npos : close - 1);
      const auto w = ascii_words_lower(inside);
      c.alias_pronoun = w.find(" we ") != std::string::npos || w.find(" us ") != std::string::npos;
      // ("Revolut", "we") after "... registered in England and Wales": the
      // quoted short name points back to the entity it abbreviates.
      const auto short_name = quoted_term(inside);
      if (c.alias_pronoun && !short_name.empty() && !starts_with_word(c.text, short_name)) {
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
          if (starts_with_word(it->text, short_name)) {
            it->alias_pronoun = true;
            it->evidence = evidence_points(*it);
            it->score = it->evidence;
            c.alias_pronoun = false;
            break;
          }
        }
      }
    }
    c.evidence = evidence_points(c);
    c.score = c.evidence;
    out.push_back(std::move(c));
  }
  return out;
}

bool is_excluded_candidate(std::string_view candidate, const EntityRules& rules) {
  const auto key = span_key(candidate);
  if (key.empty()) return true;
  if (kPronouns.contains(key) || rules.generic.contains(key)) return true;
  // Only designators ("Inc.") or digits.
  bool has_name = false;
  for (auto tok : text::split(key, ' ')) {
    if (tok.empty()) continue;
    const bool digits = std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (!digits && !rules.designators.contains(tok)) has_name = true;
  }
  return !has_name;
}

ControllerExtraction RuleBasedExtractor::extract(std::span<const ScoredParagraph> paragraphs,
                                                 const EntityRules& rules) const {
  if (paragraphs.empty()) throw Error(Errc::NoController, "no paragraphs to search");
  ControllerExtraction out;
  const std::size_t n = paragraphs.size();
  for (std::size_t rank = 0; rank < n; ++rank) {
    for (auto& c : generate_candidates(paragraphs[rank].text, rules)) {
      if (c.evidence <= 0 || is_excluded_candidate(c.text, rules)) continue;
      c.paragraph_rank = rank;
      c.paragraph_index = paragraphs[rank].index;
      c.score = c.evidence + static_cast<int>(n - rank);
      out.candidates.push_back(std::move(c));
    }
  }
  if (out.candidates.empty()) throw Error(Errc::NoController, "no organization candidate with supporting evidence");
  const auto best = std::min_element(out.candidates.begin(), out.candidates.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.paragraph_rank != b.paragraph_rank) return a.paragraph_rank < b.paragraph_rank;
    return a.offset < b.offset;
  });
  out.controller = best->text;
  out.paragraph_index = best->paragraph_index;
  return out;
}

ControllerExtraction extract_controller(std::span<const ScoredParagraph> paragraphs, const EntityRules& rules) {
  return RuleBasedExtractor{}.extract(paragraphs, rules);
}

}  // namespace orgtrace
