#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace orgtrace {

// Lowercase, dot-free-at-the-end hostname. Labels stay in their punycode form.
class Fqdn {
 public:
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& text() const noexcept { return text_; }

  bool operator==(const Fqdn& other) const noexcept { return labels_ == other.labels_; }

 private:
  friend Fqdn parse_fqdn(std::string_view text);
  std::vector<std::string> labels_;
  std::string text_;
};

// Throws Error{EmptyInput} or Error{IllegalLabel}.
Fqdn parse_fqdn(std::string_view text);

struct RegistrableDomain {
  std::string text;    // e.g. "example.co.uk"
  std::string suffix;  // e.g. "co.uk"

  bool operator==(const RegistrableDomain&) const = default;
};

// Public-suffix rules in the publicsuffix.org list format.
class SuffixRules {
 public:
  static SuffixRules parse(std::string_view content);
  static const SuffixRules& bundled();

  // Number of trailing labels forming the public suffix (>= 1; unknown TLDs
  // fall back to the single last label).
  std::size_t suffix_length(const std::vector<std::string>& labels) const;

  const std::string& snapshot() const noexcept { return snapshot_; }
  std::size_t size() const noexcept { return exact_.size() + wildcard_.size() + exception_.size(); }

 private:
  std::unordered_set<std::string> exact_;
  std::unordered_set<std::string> wildcard_;   // "*.ck" stored as "ck"
  std::unordered_set<std::string> exception_;  // "!www.ck" stored as "www.ck"
  std::string snapshot_;
};

// Throws Error{IsPublicSuffix} or Error{NoLabels}.
RegistrableDomain registrable_domain(const Fqdn& fqdn, const SuffixRules& rules);

// Convenience for hostnames taken from URLs. Returns the host itself when it
// cannot be parsed or is a bare public suffix, so callers can always compare.
std::string registrable_key(std::string_view host, const SuffixRules& rules);

// Trailing corporate-form tokens ("inc", "gmbh", ...), already normalized.
class DesignatorGazetteer {
 public:
  static DesignatorGazetteer parse(std::string_view content);
  static const DesignatorGazetteer& bundled();

  // `token` is compared after lowercasing and dropping dots ("S.A." -> "sa").
  bool contains(std::string_view token) const;
  const std::unordered_set<std::string>& entries() const noexcept { return entries_; }

 private:
  std::unordered_set<std::string> entries_;
};

struct NormalizedOrg {
  std::string text;
  std::string original;

  bool operator==(const NormalizedOrg& other) const noexcept { return text == other.text; }
};

// Casefold, drop dots and apostrophes, turn other punctuation into spaces,
// collapse whitespace and strip trailing legal designators. Idempotent.
// Throws Error{EmptyAfterNormalization}.
NormalizedOrg normalize_org(std::string_view name,
                            const DesignatorGazetteer& designators = DesignatorGazetteer::bundled());

}  // namespace orgtrace
