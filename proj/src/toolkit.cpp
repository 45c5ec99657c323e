#include "orgtrace/toolkit.hpp"

#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

std::unique_ptr<FixtureStore> make_store(const Config& c) {
  if (c.mode == FixtureMode::Live) return std::make_unique<FixtureStore>();
  if (c.fixture_dir.empty()) {
    throw Error(Errc::ConfigError, std::string(fixture_mode_name(c.mode)) + " mode needs a fixture directory");
  }
  return std::make_unique<FixtureStore>(c.mode, c.fixture_dir);
}

PolicyClassifier load_classifier(const Config& c) {
  if (c.model.empty()) return bundled_classifier();
  return PolicyClassifier::load(std::filesystem::path(c.model));
}

}  // namespace

Toolkit::Toolkit(const Config& config)
    : config_(config),
      rules_(config.suffix_rules.empty() ? SuffixRules::bundled()
                                         : SuffixRules::parse(text::read_file(config.suffix_rules))),
      store_(make_store(config)),
      links_(LinkLexicon::parse(text::load_resource(config.link_lexicon, "link_lexicon.tsv"))),
      classifier_(load_classifier(config)),
      controller_lexicon_(
          ControllerLexicon::parse(text::load_resource(config.controller_lexicon, "controller_lexicon.tsv"))),
      entity_rules_(
          EntityRules::load(config.designators, config.triggers, config.generic_blocklist, config.known_orgs)),
      whois_servers_(WhoisServerMap::parse(text::load_resource(config.tld_servers, "tld_servers.tsv"))),
      redaction_(RedactionLexicon::parse(text::load_resource(config.redaction_lexicon, "redaction_lexicon.txt"))),
      ev_oids_(EvOidList::parse(text::load_resource(config.ev_oids, "ev_oids.txt"))) {
  if (config.mode != FixtureMode::Replay) {
    network_ = std::make_shared<SystemNetwork>();
    // Cached answers would hide real transactions from a recording.
    if (config.mode == FixtureMode::Live && !config.cache_dir.empty()) {
      cache_ = std::make_shared<EvidenceCache>(config.cache_dir, std::chrono::hours(24) * config.cache_ttl_days);
      network_ = std::make_shared<CachedNetwork>(network_, cache_, rules_);
    }
  }
  fetcher_ = std::make_unique<Fetcher>(*store_, rules_, config.fetch, network_);
  if (config.mode != FixtureMode::Replay && config.search_provider == "google-cse") {
    search_ = std::make_unique<GoogleSearchProvider>(network_, config.search_limit);
  } else {
    search_ = std::make_unique<NullSearchProvider>("google-cse", config.search_limit);
  }
  whois_ = std::make_unique<WhoisClient>(*store_, whois_servers_, network_, config.fetch.timeouts());
}

AnalysisComponents Toolkit::analysis() const {
  return AnalysisComponents{LanguageProfiles::bundled(), classifier_,      controller_lexicon_,
                            entity_rules_,               extractor_,       config_.language_margin};
}

Resolver Toolkit::resolver(bool inspect_certificate) const {
  ResolverServices services{rules_, *fetcher_, *search_, links_, analysis(), *whois_, redaction_, 2, false, {}};
  services.inspect_certificate = inspect_certificate;
  if (cache_) {
    auto cache = cache_;
    services.on_policy_text = [cache](const RegistrableDomain& domain, const PolicyText& policy) {
      StoredResponse r;
      r.status = 200;
      r.body = policy.full_text;
      cache->put("policy", domain.text, policy.url, r);
    };
  }
  return Resolver(std::move(services));
}

}  // namespace orgtrace
