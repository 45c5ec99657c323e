#pragma once

// Everything a command needs, built once from a Config: resource files,
// fixture store, transports and the resolver services.

#include <memory>
#include <optional>

#include "orgtrace/cache.hpp"
#include "orgtrace/config.hpp"
#include "orgtrace/resolver.hpp"

namespace orgtrace {

class Toolkit {
 public:
  // Throws Error{ConfigError} for an unusable mode/directory combination.
  explicit Toolkit(const Config& config);

  Toolkit(const Toolkit&) = delete;
  Toolkit& operator=(const Toolkit&) = delete;

  Resolver resolver(bool inspect_certificate = false) const;
  AnalysisComponents analysis() const;

  const Config& config() const noexcept { return config_; }
  const SuffixRules& rules() const noexcept { return rules_; }
  FixtureStore& store() const noexcept { return *store_; }
  // Null in replay mode.
  const std::shared_ptr<LiveNetwork>& network() const noexcept { return network_; }
  const Fetcher& fetcher() const noexcept { return *fetcher_; }
  const SearchProvider& search() const noexcept { return *search_; }
  const LinkLexicon& links() const noexcept { return links_; }
  const PolicyClassifier& classifier() const noexcept { return classifier_; }
  const EntityRules& entity_rules() const noexcept { return entity_rules_; }
  const WhoisClient& whois() const noexcept { return *whois_; }
  const RedactionLexicon& redaction() const noexcept { return redaction_; }
  const EvOidList& ev_oids() const noexcept { return ev_oids_; }
  const std::shared_ptr<EvidenceCache>& cache() const noexcept { return cache_; }

 private:
  Config config_;
  SuffixRules rules_;
  std::unique_ptr<FixtureStore> store_;
  std::shared_ptr<EvidenceCache> cache_;
  std::shared_ptr<LiveNetwork> network_;
  std::unique_ptr<Fetcher> fetcher_;
  std::unique_ptr<SearchProvider> search_;
  LinkLexicon links_;
  PolicyClassifier classifier_;
  ControllerLexicon controller_lexicon_;
  EntityRules entity_rules_;
  RuleBasedExtractor extractor_;
  WhoisServerMap whois_servers_;
  std::unique_ptr<WhoisClient> whois_;
  RedactionLexicon redaction_;
  EvOidList ev_oids_;
};

}  // namespace orgtrace
