#pragma once

// Attribution of a domain to the organization holding it: privacy-policy
// analysis first, WHOIS registrant second, Unidentified otherwise.

#include <compare>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orgtrace/analysis.hpp"
#include "orgtrace/certinfo.hpp"
#include "orgtrace/discovery.hpp"
#include "orgtrace/whois.hpp"

namespace orgtrace {

enum class Method { PolicyAnalysis, Whois, Unidentified };
std::string_view method_name(Method method);
std::optional<Method> method_from_name(std::string_view name);

enum class FlagKind { CrossSldRedirect, PolicyStageFailed, WhoisRedacted, WhoisFailed, InvalidDomain };

struct ResultFlag {
  FlagKind kind;
  std::string detail;  // stage / reason for the *Failed kinds

  // "cross_sld_redirect", "policy_failed:<stage>:<error>", "whois_redacted",
  // "whois_failed:<reason>", "invalid_domain".
  std::string str() const;
  static std::optional<ResultFlag> parse(std::string_view text);

  auto operator<=>(const ResultFlag&) const = default;
};

struct PolicyEvidence {
  std::string url;
  std::size_t paragraph_index = 0;
};

struct WhoisEvidence {
  std::string server;  // hop the registrant line came from
  std::size_t hops = 0;
};

struct RoiResult {
  std::string input_fqdn;
  std::string registrable_domain;
  std::optional<std::string> organization;
  Method method = Method::Unidentified;
  std::optional<PolicyEvidence> policy_evidence;
  std::optional<WhoisEvidence> whois_evidence;
  std::set<ResultFlag> flags;
  std::optional<CertificateSummary> certificate_note;  // informational only

  bool has_flag(FlagKind kind) const;
  // "policy:<url>#paragraph=<n>", "whois:<server>", or empty.
  std::string evidence_locator() const;
};

struct PolicyAttempt {
  std::optional<std::string> organization;
  std::optional<PolicyEvidence> evidence;
  bool cross_sld_redirect = false;
  std::vector<ResultFlag> failures;
};

struct WhoisAttempt {
  std::optional<RegistrantResult> registrant;
  std::optional<WhoisEvidence> evidence;
  std::optional<std::string> failure;  // error name when the query failed
};

struct ResolverServices {
  const SuffixRules& rules;
  const Fetcher& fetcher;
  const SearchProvider& search;
  const LinkLexicon& links;
  AnalysisComponents analysis;
  const WhoisClient& whois;
  const RedactionLexicon& redaction;
  std::size_t max_candidates = 2;
  // Certificate inspection is attached as a note and never attributes.
  bool inspect_certificate = false;
  std::function<void(const RegistrableDomain&, const PolicyText&)> on_policy_text;
};

class Resolver {
 public:
  explicit Resolver(ResolverServices services) : services_(std::move(services)) {}

  // Throws Error{InvalidDomain} only.
  RoiResult resolve(std::string_view fqdn) const;
  RoiResult resolve(const Fqdn& fqdn) const;

  // Output order equals input order; one pipeline run per registrable domain.
  std::vector<RoiResult> resolve_batch(std::span<const std::string> fqdns, std::size_t parallelism) const;

  PolicyAttempt attempt_policy(const RegistrableDomain& domain, BudgetTracker& budget) const;
  WhoisAttempt attempt_whois(const RegistrableDomain& domain) const;

  const ResolverServices& services() const noexcept { return services_; }

 private:
  RoiResult resolve_registrable(const Fqdn& fqdn, const RegistrableDomain& domain) const;

  ResolverServices services_;
};

// Final decision from the two attempts. `whois` must be present whenever the
// policy attempt produced no usable organization.
RoiResult combine_attempts(const Fqdn& fqdn, const RegistrableDomain& domain, const PolicyAttempt& policy,
                           const std::optional<WhoisAttempt>& whois);

// One JSON object per line with keys fqdn, registrable_domain, organization,
// method, flags, evidence.
std::string to_record_line(const RoiResult& result);
// Throws Error{FormatError}. Accepts "domain" as an alias of "fqdn" so that
// other tools' output can be scored.
RoiResult parse_record_line(std::string_view line);

}  // namespace orgtrace
