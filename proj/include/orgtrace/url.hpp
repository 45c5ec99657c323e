#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace orgtrace {

// Absolute http(s) URL. Scheme and host are lowercase; the default port is
// not stored.
struct Url {
  std::string scheme;
  std::string host;
  std::optional<int> port;
  std::string path = "/";
  std::string query;  // without '?'

  // Canonical form: query parameters sorted, no fragment.
  std::string str() const;
  std::string path_and_query() const;
  int effective_port() const { return port.value_or(scheme == "https" ? 443 : 80); }
};

std::optional<Url> parse_url(std::string_view text);

// RFC 3986 reference resolution (the subset needed for links and Location
// headers). Returns nullopt for non-http(s) results.
std::optional<Url> resolve_url(const Url& base, std::string_view reference);

std::string percent_encode(std::string_view s);

}  // namespace orgtrace
