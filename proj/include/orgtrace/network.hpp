#pragma once

// Live transports. Nothing outside this interface opens sockets; replay runs
// never construct a SystemNetwork.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "orgtrace/fixture_store.hpp"
#include "orgtrace/url.hpp"

namespace orgtrace {

struct NetTimeouts {
  std::chrono::milliseconds connect{10'000};
  std::chrono::milliseconds total{30'000};
};

struct HttpRequestOptions {
  NetTimeouts timeouts;
  std::string accept_language = "en";
  std::string user_agent;
};

class LiveNetwork {
 public:
  virtual ~LiveNetwork() = default;

  // Single request, redirects are not followed. Failures are returned in
  // StoredResponse::error so they can be archived.
  virtual StoredResponse http_get(const Url& url, const HttpRequestOptions& options) = 0;
  virtual StoredResponse whois(const std::string& server, const std::string& query,
                               const NetTimeouts& timeouts) = 0;
  // Body holds the DER-encoded leaf certificate.
  virtual StoredResponse tls_leaf(const std::string& host, int port, const NetTimeouts& timeouts) = 0;
  virtual StoredResponse https_get_json(const Url& url, const NetTimeouts& timeouts) = 0;
};

// Minimum spacing between consecutive requests to the same host.
class HostRateLimiter {
 public:
  explicit HostRateLimiter(std::chrono::milliseconds spacing) : spacing_(spacing) {}
  void acquire(const std::string& host);

 private:
  std::chrono::milliseconds spacing_;
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_slot_;
};

class SystemNetwork final : public LiveNetwork {
 public:
  explicit SystemNetwork(std::chrono::milliseconds per_host_spacing = std::chrono::seconds(1));

  StoredResponse http_get(const Url& url, const HttpRequestOptions& options) override;
  StoredResponse whois(const std::string& server, const std::string& query,
                       const NetTimeouts& timeouts) override;
  StoredResponse tls_leaf(const std::string& host, int port, const NetTimeouts& timeouts) override;
  StoredResponse https_get_json(const Url& url, const NetTimeouts& timeouts) override;

 private:
  HostRateLimiter limiter_;
};

// Process-wide count of sockets opened by SystemNetwork.
std::uint64_t sockets_opened();

}  // namespace orgtrace
