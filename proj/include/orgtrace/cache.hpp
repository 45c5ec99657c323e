#pragma once

// On-disk evidence cache used in live mode: raw WHOIS text, DER
// certificates, HTML snapshots and extracted policy text, keyed by kind and
// registrable domain.

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "orgtrace/domain.hpp"
#include "orgtrace/fixture_store.hpp"
#include "orgtrace/network.hpp"

namespace orgtrace {

class EvidenceCache {
 public:
  EvidenceCache(std::filesystem::path dir, std::chrono::seconds ttl);

  // Fresh entry or nullopt; expired entries are treated as absent.
  std::optional<StoredResponse> get(std::string_view kind, std::string_view registrable,
                                    std::string_view key) const;
  void put(std::string_view kind, std::string_view registrable, std::string_view key,
           const StoredResponse& response) const;

  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::filesystem::path entry_path(std::string_view kind, std::string_view registrable, std::string_view key) const;

  std::filesystem::path dir_;
  std::chrono::seconds ttl_;
};

// Serves repeated live requests from an EvidenceCache. Search API calls are
// never cached.
class CachedNetwork final : public LiveNetwork {
 public:
  CachedNetwork(std::shared_ptr<LiveNetwork> inner, std::shared_ptr<EvidenceCache> cache, const SuffixRules& rules);

  StoredResponse http_get(const Url& url, const HttpRequestOptions& options) override;
  StoredResponse whois(const std::string& server, const std::string& query, const NetTimeouts& timeouts) override;
  StoredResponse tls_leaf(const std::string& host, int port, const NetTimeouts& timeouts) override;
  StoredResponse https_get_json(const Url& url, const NetTimeouts& timeouts) override;

 private:
  template <typename F>
  StoredResponse through(std::string_view kind, std::string_view registrable, const Descriptor& d, F&& call);

  std::shared_ptr<LiveNetwork> inner_;
  std::shared_ptr<EvidenceCache> cache_;
  const SuffixRules& rules_;
};

}  // namespace orgtrace
