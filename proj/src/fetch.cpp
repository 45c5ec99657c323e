#include "orgtrace/fetch.hpp"

#include <cmath>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"
#include "orgtrace/url.hpp"

namespace orgtrace {

namespace {

std::chrono::milliseconds to_ms(double seconds) {
  return std::chrono::milliseconds(static_cast<long long>(std::llround(seconds * 1000.0)));
}

}  // namespace

void FetchPolicy::validate() const {
  if (max_requests_per_domain <= 0) throw Error(Errc::InvalidArgument, "max_requests_per_domain must be positive");
  if (!(connect_timeout > 0)) throw Error(Errc::InvalidArgument, "connect_timeout must be positive");
  if (!(total_timeout > 0)) throw Error(Errc::InvalidArgument, "total_timeout must be positive");
  if (connect_timeout > total_timeout) {
    throw Error(Errc::InvalidArgument, "connect_timeout exceeds total_timeout");
  }
  if (max_redirects < 1) throw Error(Errc::InvalidArgument, "max_redirects must be at least 1");
}

NetTimeouts FetchPolicy::timeouts() const { return NetTimeouts{to_ms(connect_timeout), to_ms(total_timeout)}; }

void BudgetTracker::consume(const std::string& registrable) {
  std::lock_guard lock(mutex_);
  int& n = used_[registrable];
  if (n >= max_) {
    throw Error(Errc::BudgetExhausted,
                "request budget of " + std::to_string(max_) + " exhausted for " + registrable);
  }
  ++n;
}

int BudgetTracker::used(const std::string& registrable) const {
  std::lock_guard lock(mutex_);
  auto it = used_.find(registrable);
  return it == used_.end() ? 0 : it->second;
}

int BudgetTracker::remaining(const std::string& registrable) const { return max_ - used(registrable); }

Fetcher::Fetcher(FixtureStore& store, const SuffixRules& rules, FetchPolicy policy,
                 std::shared_ptr<LiveNetwork> network)
    : store_(store), rules_(rules), policy_(std::move(policy)), network_(std::move(network)) {
  policy_.validate();
}

FetchResult Fetcher::fetch(std::string_view url_text, BudgetTracker& budget) const {
  auto url = parse_url(url_text);
  if (!url) throw Error(Errc::InvalidArgument, "not an http(s) URL: " + std::string(url_text));

  HttpRequestOptions options{policy_.timeouts(), policy_.accept_language, policy_.user_agent};
  FetchResult result;
  while (true) {
    const std::string current = url->str();
    result.redirect_chain.push_back(current);
    budget.consume(registrable_key(url->host, rules_));

    const Url request = *url;
    auto response = store_.transact(Descriptor::http_get(request), [&] {
      if (!network_) throw Error(Errc::TransportFailure, "no live network for " + current);
      return network_->http_get(request, options);
    });
    response.raise_if_error("GET " + current);

    const auto location = response.header("Location");
    if (response.status >= 300 && response.status < 400 && location) {
      auto next = resolve_url(*url, *location);
      if (!next) throw Error(Errc::TransportFailure, "unusable redirect target '" + *location + "'");
      if (static_cast<int>(result.redirect_chain.size()) >= policy_.max_redirects) {
        throw Error(Errc::TooManyRedirects, "more than " + std::to_string(policy_.max_redirects) +
                                                " URLs in redirect chain from " + result.redirect_chain.front());
      }
      url = std::move(next);
      continue;
    }
    result.final_url = current;
    result.status_code = response.status;
    result.content_type = response.header("Content-Type").value_or("");
    result.body = std::move(response.body);
    return result;
  }
}

std::vector<std::string> NullSearchProvider::live_search(const std::string& query) const {
  throw Error(Errc::ProviderUnavailable, "no search credentials configured (query '" + query + "')");
}

GoogleSearchProvider::GoogleSearchProvider(std::shared_ptr<LiveNetwork> network, std::size_t limit)
    : network_(std::move(network)), limit_(limit) {}

std::vector<std::string> GoogleSearchProvider::parse_response(std::string_view json) {
  auto doc = nlohmann::json::parse(json, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(Errc::ProviderUnavailable, "malformed search response");
  std::vector<std::string> links;
  if (auto it = doc.find("items"); it != doc.end() && it->is_array()) {
    for (const auto& item : *it) {
      if (item.is_object() && item.contains("link") && item["link"].is_string()) {
        links.push_back(item["link"].get<std::string>());
      }
    }
  }
  return links;
}

std::vector<std::string> GoogleSearchProvider::live_search(const std::string& query) const {
  const char* key = std::getenv("ORGTRACE_SEARCH_KEY");
  const char* cx = std::getenv("ORGTRACE_SEARCH_CX");
  if (!key || !*key || !cx || !*cx) {
    throw Error(Errc::ProviderUnavailable, "ORGTRACE_SEARCH_KEY / ORGTRACE_SEARCH_CX not set");
  }
  if (!network_) throw Error(Errc::ProviderUnavailable, "no live network");
  const std::size_t num = std::min<std::size_t>(limit_, 10);
  auto url = parse_url("https://www.googleapis.com/customsearch/v1?key=" + percent_encode(key) +
                       "&cx=" + percent_encode(cx) + "&q=" + percent_encode(query) +
                       "&num=" + std::to_string(num));
  auto response = network_->https_get_json(*url, NetTimeouts{});
  if (response.error) throw Error(Errc::ProviderUnavailable, "search request failed: " + *response.error);
  if (response.status != 200) {
    throw Error(Errc::ProviderUnavailable, "search API returned HTTP " + std::to_string(response.status));
  }
  return parse_response(response.body);
}

std::vector<std::string> search(std::string_view query, const SearchProvider& provider, FixtureStore& store) {
  const auto q = text::collapse_whitespace(query);
  if (q.empty()) throw Error(Errc::EmptyInput, "empty search query");
  auto response = store.transact(Descriptor::search(provider.id(), q), [&] {
    StoredResponse r;
    r.status = 200;
    std::vector<std::string> urls = provider.live_search(q);
    r.body = text::join(urls, "\n");
    return r;
  });
  response.raise_if_error("search '" + q + "'");
  std::vector<std::string> urls;
  for (auto& line : text::split_lines(response.body)) {
    auto t = text::trim(line);
    if (!t.empty()) urls.emplace_back(t);
    if (urls.size() >= provider.limit()) break;
  }
  return urls;
}

}  // namespace orgtrace
