#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "orgtrace/domain.hpp"
#include "orgtrace/fixture_store.hpp"
#include "orgtrace/network.hpp"

namespace orgtrace {

struct FetchPolicy {
  int max_requests_per_domain = 5;
  double connect_timeout = 10.0;  // seconds
  double total_timeout = 30.0;    // seconds
  int max_redirects = 10;
  std::string accept_language = "en";
  std::string user_agent =
      "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like Gecko) "
      "Chrome/124.0 Safari/537.36";

  // Throws Error{InvalidArgument}.
  void validate() const;
  NetTimeouts timeouts() const;
};

struct FetchResult {
  std::string final_url;
  int status_code = 0;
  std::string body;
  std::string content_type;
  // Every URL requested, in order; the last element is final_url.
  std::vector<std::string> redirect_chain;
};

// Requests issued per registrable domain during one resolution.
class BudgetTracker {
 public:
  explicit BudgetTracker(int max_per_domain = 5) : max_(max_per_domain) {}

  // Throws Error{BudgetExhausted} without counting when the cap is reached.
  void consume(const std::string& registrable);
  int used(const std::string& registrable) const;
  int remaining(const std::string& registrable) const;
  int limit() const noexcept { return max_; }

 private:
  int max_;
  mutable std::mutex mutex_;
  std::map<std::string, int> used_;
};

class Fetcher {
 public:
  // `network` may be null in replay mode.
  Fetcher(FixtureStore& store, const SuffixRules& rules, FetchPolicy policy,
          std::shared_ptr<LiveNetwork> network);

  // GET with manual redirect following. Each hop is one archived transaction
  // and consumes budget of the hop's own registrable domain.
  FetchResult fetch(std::string_view url, BudgetTracker& budget) const;

  const FetchPolicy& policy() const noexcept { return policy_; }
  const SuffixRules& rules() const noexcept { return rules_; }
  FixtureStore& store() const noexcept { return store_; }
  const std::shared_ptr<LiveNetwork>& network() const noexcept { return network_; }

 private:
  FixtureStore& store_;
  const SuffixRules& rules_;
  FetchPolicy policy_;
  std::shared_ptr<LiveNetwork> network_;
};

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;
  virtual std::string id() const = 0;
  virtual std::size_t limit() const = 0;
  // Live query; throws Error{ProviderUnavailable}.
  virtual std::vector<std::string> live_search(const std::string& query) const = 0;
};

// Provider used when no credentials are configured; only replay can answer.
class NullSearchProvider final : public SearchProvider {
 public:
  explicit NullSearchProvider(std::string id = "google-cse", std::size_t limit = 10)
      : id_(std::move(id)), limit_(limit) {}
  std::string id() const override { return id_; }
  std::size_t limit() const override { return limit_; }
  std::vector<std::string> live_search(const std::string& query) const override;

 private:
  std::string id_;
  std::size_t limit_;
};

// Google Programmable Search JSON API. Key and engine id come from the
// environment variables ORGTRACE_SEARCH_KEY and ORGTRACE_SEARCH_CX.
class GoogleSearchProvider final : public SearchProvider {
 public:
  GoogleSearchProvider(std::shared_ptr<LiveNetwork> network, std::size_t limit = 10);
  std::string id() const override { return "google-cse"; }
  std::size_t limit() const override { return limit_; }
  std::vector<std::string> live_search(const std::string& query) const override;

  static std::vector<std::string> parse_response(std::string_view json);

 private:
  std::shared_ptr<LiveNetwork> network_;
  std::size_t limit_;
};

// Ranked URLs for `query`, truncated to the provider limit. Never touches the
// target-domain budget. Throws EmptyInput, ProviderUnavailable, ReplayMiss.
std::vector<std::string> search(std::string_view query, const SearchProvider& provider,
                                FixtureStore& store);

}  // namespace orgtrace
