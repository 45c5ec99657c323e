#include "orgtrace/domain.hpp"

#include <cctype>

#include "orgtrace/embedded.hpp"
#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

constexpr std::size_t kMaxLabel = 63;
constexpr std::size_t kMaxName = 253;

bool label_char_ok(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
}

std::string join_from(const std::vector<std::string>& labels, std::size_t first) {
  std::string out;
  for (std::size_t i = first; i < labels.size(); ++i) {
    if (i != first) out.push_back('.');
    out += labels[i];
  }
  return out;
}

}  // namespace

Fqdn parse_fqdn(std::string_view input) {
  auto t = text::trim(input);
  if (t.empty()) throw Error(Errc::EmptyInput, "empty domain name");
  std::string name = text::lower(t);
  if (name.back() == '.') name.pop_back();
  if (name.empty()) throw Error(Errc::IllegalLabel, "domain name is only a dot");
  if (name.size() > kMaxName) throw Error(Errc::IllegalLabel, "domain name longer than 253 bytes");

  Fqdn out;
  for (auto label : text::split(name, '.')) {
    if (label.empty()) throw Error(Errc::IllegalLabel, "empty label in '" + name + "'");
    if (label.size() > kMaxLabel) throw Error(Errc::IllegalLabel, "label longer than 63 bytes");
    for (char c : label) {
      if (!label_char_ok(c)) {
        throw Error(Errc::IllegalLabel, "forbidden character in label '" + std::string(label) + "'");
      }
    }
    out.labels_.emplace_back(label);
  }
  out.text_ = std::move(name);
  return out;
}

SuffixRules SuffixRules::parse(std::string_view content) {
  SuffixRules rules;
  for (const auto& raw : text::split_lines(content)) {
    auto line = text::trim(raw);
    if (line.starts_with("//")) {
      constexpr std::string_view kVersion = "// VERSION:";
      if (line.starts_with(kVersion) && rules.snapshot_.empty()) {
        rules.snapshot_ = std::string(text::trim(line.substr(kVersion.size())));
      }
      continue;
    }
    // A rule ends at the first whitespace.
    auto end = line.find_first_of(" \t");
    if (end != std::string_view::npos) line = line.substr(0, end);
    if (line.empty()) continue;
    std::string rule = text::lower(line);
    if (rule.front() == '!') {
      rules.exception_.insert(rule.substr(1));
    } else if (rule.starts_with("*.")) {
      rules.wildcard_.insert(rule.substr(2));
    } else {
      rules.exact_.insert(std::move(rule));
    }
  }
  return rules;
}

const SuffixRules& SuffixRules::bundled() {
  static const SuffixRules rules = parse(text::load_resource("", "public_suffix_list.dat"));
  return rules;
}

std::size_t SuffixRules::suffix_length(const std::vector<std::string>& labels) const {
  const std::size_t n = labels.size();
  std::size_t best = 1;  // implicit "*" rule
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = n - i;
    const std::string candidate = join_from(labels, i);
    if (exception_.contains(candidate)) return len - 1;
    if (exact_.contains(candidate)) best = std::max(best, len);
    if (i + 1 < n && wildcard_.contains(join_from(labels, i + 1))) best = std::max(best, len);
  }
  return best;
}

RegistrableDomain registrable_domain(const Fqdn& fqdn, const SuffixRules& rules) {
  const auto& labels = fqdn.labels();
  if (labels.empty()) throw Error(Errc::NoLabels, "domain has no labels");
  const std::size_t suffix_len = rules.suffix_length(labels);
  if (labels.size() <= suffix_len) {
    throw Error(Errc::IsPublicSuffix, "'" + fqdn.text() + "' is a public suffix");
  }
  RegistrableDomain out;
  out.suffix = join_from(labels, labels.size() - suffix_len);
  out.text = join_from(labels, labels.size() - suffix_len - 1);
  return out;
}

std::string registrable_key(std::string_view host, const SuffixRules& rules) {
  try {
    return registrable_domain(parse_fqdn(host), rules).text;
  } catch (const Error&) {
    return text::lower(host);
  }
}

DesignatorGazetteer DesignatorGazetteer::parse(std::string_view content) {
  DesignatorGazetteer g;
  for (const auto& line : text::config_lines(content)) {
    std::string key;
    for (char c : text::lower(line)) {
      if (c != '.') key.push_back(c);
    }
    if (!key.empty()) g.entries_.insert(std::move(key));
  }
  if (g.entries_.empty()) throw Error(Errc::ConfigError, "legal designator gazetteer is empty");
  return g;
}

const DesignatorGazetteer& DesignatorGazetteer::bundled() {
  static const DesignatorGazetteer g = parse(text::load_resource("", "legal_designators.txt"));
  return g;
}

bool DesignatorGazetteer::contains(std::string_view token) const {
  std::string key;
  for (char c : token) {
    if (c != '.') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return entries_.contains(key);
}

NormalizedOrg normalize_org(std::string_view name, const DesignatorGazetteer& designators) {
  const auto trimmed = text::trim(name);
  if (trimmed.empty()) throw Error(Errc::EmptyInput, "empty organization name");

  std::string folded;
  folded.reserve(trimmed.size());
  for (char ch : trimmed) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '.' || c == '\'') continue;
    if (c >= 0x80 || std::isalnum(c)) {
      folded.push_back(static_cast<char>(std::tolower(c)));
    } else {
      folded.push_back(' ');
    }
  }

  const auto collapsed = text::collapse_whitespace(folded);
  std::vector<std::string> tokens;
  for (auto tok : text::split(collapsed, ' ')) {
    if (!tok.empty()) tokens.emplace_back(tok);
  }
  while (!tokens.empty() && designators.contains(tokens.back())) tokens.pop_back();
  if (tokens.empty()) {
    throw Error(Errc::EmptyAfterNormalization, "'" + std::string(trimmed) + "' has no name besides designators");
  }
  return NormalizedOrg{text::join(tokens, " "), std::string(trimmed)};
}

}  // namespace orgtrace
