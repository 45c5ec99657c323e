#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orgtrace/domain.hpp"
#include "orgtrace/error.hpp"
#include "orgtrace/fetch.hpp"

namespace orgtrace {

enum class HomepageSource { DirectRequest, SearchEngine };

struct HomepageResolution {
  std::string final_url;
  std::vector<std::string> redirect_chain;
  bool cross_sld_redirect = false;
  HomepageSource source = HomepageSource::DirectRequest;
  std::string body;
  std::string content_type;
};

enum class CandidateSource { HomepageLink, SearchResult };
std::string_view candidate_source_name(CandidateSource source);

struct PolicyCandidate {
  std::string url;
  CandidateSource source = CandidateSource::HomepageLink;
  double score = 0.0;
  std::optional<std::string> anchor_text;
};

// Weighted link keywords, highest weight first.
class LinkLexicon {
 public:
  explicit LinkLexicon(std::vector<std::pair<std::string, double>> keywords);
  static LinkLexicon parse(std::string_view content);
  static const LinkLexicon& bundled();

  const std::vector<std::pair<std::string, double>>& keywords() const noexcept { return keywords_; }
  // Highest weight of a keyword present as a whole word in `text` (casefolded), or 0.
  double best_weight(std::string_view text) const;

 private:
  std::vector<std::pair<std::string, double>> keywords_;
};

struct DiscoveryDeps {
  const Fetcher& fetcher;
  const SearchProvider& search;
  BudgetTracker& budget;
};

// Carries whatever discovery found before failing.
class DiscoveryError : public Error {
 public:
  DiscoveryError(Errc code, const std::string& message, std::optional<HomepageResolution> partial = {})
      : Error(code, message), partial_(std::move(partial)) {}
  const std::optional<HomepageResolution>& partial() const noexcept { return partial_; }

 private:
  std::optional<HomepageResolution> partial_;
};

// True when the chain's final host belongs to a different registrable domain.
bool crosses_registrable_domain(const std::vector<std::string>& chain, const RegistrableDomain& origin,
                                const SuffixRules& rules);

// https then http, redirects followed; falls back to a web search for the
// domain. Throws DiscoveryError{Unreachable | BudgetExhausted}.
HomepageResolution resolve_homepage(const RegistrableDomain& domain, DiscoveryDeps& deps);

// Throws Error{NoCandidates}.
std::vector<PolicyCandidate> find_policy_links(std::string_view html, std::string_view base_url,
                                               const LinkLexicon& lexicon);

// Queries "<domain> privacy policy" and keeps same-domain results.
// Throws ProviderUnavailable, ReplayMiss, NoCandidates.
std::vector<PolicyCandidate> search_policy(const RegistrableDomain& domain, DiscoveryDeps& deps);

struct DiscoveryOutcome {
  HomepageResolution homepage;
  std::vector<PolicyCandidate> candidates;
};

// Homepage links first, web search only when the homepage yields none.
// Throws DiscoveryError{Unreachable | NoCandidates | BudgetExhausted}.
DiscoveryOutcome discover(const RegistrableDomain& domain, DiscoveryDeps& deps, const LinkLexicon& lexicon);

}  // namespace orgtrace
