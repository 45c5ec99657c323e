#include "orgtrace/url.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <vector>

#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

std::string sorted_query(std::string_view query) {
  if (query.empty()) return {};
  std::vector<std::string> params;
  for (auto p : text::split(query, '&')) {
    if (!p.empty()) params.emplace_back(p);
  }
  std::stable_sort(params.begin(), params.end());
  return text::join(params, "&");
}

// Removes "." and ".." segments.
std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  const bool trailing = path.ends_with("/") || path.ends_with("/.") || path.ends_with("/..");
  for (auto seg : text::split(path, '/')) {
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      continue;
    }
    out.push_back(seg);
  }
  std::string result = "/";
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) result.push_back('/');
    result += out[i];
  }
  if (trailing && result.size() > 1) result.push_back('/');
  return result;
}

void split_path_query(std::string_view rest, std::string& path, std::string& query) {
  if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
  auto q = rest.find('?');
  if (q == std::string_view::npos) {
    path = std::string(rest);
    query.clear();
  } else {
    path = std::string(rest.substr(0, q));
    query = std::string(rest.substr(q + 1));
  }
  if (path.empty()) path = "/";
}

}  // namespace

std::string Url::path_and_query() const {
  std::string out = path.empty() ? "/" : path;
  const auto q = sorted_query(query);
  if (!q.empty()) out += "?" + q;
  return out;
}

std::string Url::str() const {
  std::string out = scheme + "://" + host;
  if (port) out += ":" + std::to_string(*port);
  out += path_and_query();
  return out;
}

std::optional<Url> parse_url(std::string_view input) {
  auto t = text::trim(input);
  const auto sep = t.find("://");
  if (sep == std::string_view::npos) return std::nullopt;
  Url url;
  url.scheme = text::lower(t.substr(0, sep));
  if (url.scheme != "http" && url.scheme != "https") return std::nullopt;
  auto rest = t.substr(sep + 3);
  const auto auth_end = rest.find_first_of("/?#");
  auto authority = rest.substr(0, auth_end);
  rest = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);
  if (authority.empty()) return std::nullopt;

  std::string_view host = authority;
  if (!authority.starts_with("[")) {
    if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
      host = authority.substr(0, colon);
      auto port_text = authority.substr(colon + 1);
      if (!port_text.empty()) {
        int port = 0;
        auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
        if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port <= 0 || port > 65535) {
          return std::nullopt;
        }
        url.port = port;
      }
    }
  }
  if (host.empty()) return std::nullopt;
  url.host = text::lower(host);
  if (!url.host.empty() && url.host.back() == '.') url.host.pop_back();
  if (url.port && *url.port == (url.scheme == "https" ? 443 : 80)) url.port.reset();
  split_path_query(rest, url.path, url.query);
  url.path = remove_dot_segments(url.path);
  return url;
}

std::optional<Url> resolve_url(const Url& base, std::string_view reference) {
  auto ref = text::trim(reference);
  if (ref.empty()) return base;
  if (ref.starts_with("//")) return parse_url(base.scheme + ":" + std::string(ref));

  // A scheme is letters/digits/+-. followed by ':' before any '/', '?' or '#'.
  if (auto colon = ref.find(':'); colon != std::string_view::npos) {
    const auto first_delim = ref.find_first_of("/?#");
    const bool is_scheme =
        colon > 0 && (first_delim == std::string_view::npos || colon < first_delim) &&
        std::all_of(ref.begin(), ref.begin() + static_cast<long>(colon), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
        });
    if (is_scheme) return parse_url(ref);
  }

  Url out = base;
  if (ref.front() == '#') return out;
  if (ref.front() == '?') {
    std::string path;
    split_path_query(std::string(base.path) + std::string(ref), path, out.query);
    return out;
  }
  std::string path;
  std::string query;
  split_path_query(ref, path, query);
  if (!ref.starts_with("/")) {
    const auto slash = base.path.rfind('/');
    const std::string dir = slash == std::string::npos ? "/" : base.path.substr(0, slash + 1);
    path = dir + path;
  }
  out.path = remove_dot_segments(path);
  out.query = query;
  return out;
}

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

}  // namespace orgtrace
