#include "orgtrace/cache.hpp"

#include <fstream>

#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"
#include "orgtrace/url.hpp"

namespace orgtrace {

namespace fs = std::filesystem;

EvidenceCache::EvidenceCache(fs::path dir, std::chrono::seconds ttl) : dir_(std::move(dir)), ttl_(ttl) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(Errc::IoError, "cannot create cache directory " + dir_.string());
}

fs::path EvidenceCache::entry_path(std::string_view kind, std::string_view registrable, std::string_view key) const {
  std::string safe;
  for (char c : registrable) safe.push_back(c == '/' || c == '\\' ? '_' : c);
  if (safe.empty()) safe = "_";
  return dir_ / std::string(kind) / safe / (text::sha256_hex(key).substr(0, 16) + ".txn");
}

std::optional<StoredResponse> EvidenceCache::get(std::string_view kind, std::string_view registrable,
                                                 std::string_view key) const {
  const auto path = entry_path(kind, registrable, key);
  std::error_code ec;
  const auto mtime = fs::last_write_time(path, ec);
  if (ec) return std::nullopt;
  if (fs::file_time_type::clock::now() - mtime > ttl_) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    std::string stored_key;
    auto r = decode_transaction(bytes, &stored_key);
    if (stored_key != key) return std::nullopt;
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

void EvidenceCache::put(std::string_view kind, std::string_view registrable, std::string_view key,
                        const StoredResponse& response) const {
  const auto path = entry_path(kind, registrable, key);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) return;
  TxnKind k = txn_kind_from_name(kind).value_or(TxnKind::Http);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << encode_transaction(Descriptor{k, std::string(key)}, response);
}

CachedNetwork::CachedNetwork(std::shared_ptr<LiveNetwork> inner, std::shared_ptr<EvidenceCache> cache,
                             const SuffixRules& rules)
    : inner_(std::move(inner)), cache_(std::move(cache)), rules_(rules) {}

template <typename F>
StoredResponse CachedNetwork::through(std::string_view kind, std::string_view registrable, const Descriptor& d,
                                      F&& call) {
  if (auto hit = cache_->get(kind, registrable, d.key)) return *hit;
  auto r = call();
  if (!r.error) cache_->put(kind, registrable, d.key, r);
  return r;
}

StoredResponse CachedNetwork::http_get(const Url& url, const HttpRequestOptions& options) {
  return through("http", registrable_key(url.host, rules_), Descriptor::http_get(url),
                 [&] { return inner_->http_get(url, options); });
}

StoredResponse CachedNetwork::whois(const std::string& server, const std::string& query, const NetTimeouts& timeouts) {
  return through("whois", query, Descriptor::whois(server, query), [&] { return inner_->whois(server, query, timeouts); });
}

StoredResponse CachedNetwork::tls_leaf(const std::string& host, int port, const NetTimeouts& timeouts) {
  return through("tls", registrable_key(host, rules_), Descriptor::tls(host, port),
                 [&] { return inner_->tls_leaf(host, port, timeouts); });
}

StoredResponse CachedNetwork::https_get_json(const Url& url, const NetTimeouts& timeouts) {
  return inner_->https_get_json(url, timeouts);
}

}  // namespace orgtrace
