#pragma once

// Record/replay archive for every network transaction (HTTP, WHOIS, TLS,
// search). Layout of an archive directory:
//
//   index.tsv              key<TAB>kind<TAB>path<TAB>timestamp, one per line
//   <kind>/<hash>.txn      header block, blank line, verbatim body
//
// The header block of a transaction file carries the key, status, response
// headers, an optional error code and the body length and SHA-256, so that a
// tampered body is detectable without the index.

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orgtrace {

struct Url;

enum class FixtureMode { Live, Record, Replay };
enum class TxnKind { Http, Whois, Tls, Search };

std::string_view fixture_mode_name(FixtureMode mode);
std::string_view txn_kind_name(TxnKind kind);
std::optional<TxnKind> txn_kind_from_name(std::string_view name);

struct Descriptor {
  TxnKind kind = TxnKind::Http;
  std::string key;

  static Descriptor http_get(const Url& url);
  static Descriptor whois(std::string_view server, std::string_view query);
  static Descriptor tls(std::string_view host, int port);
  static Descriptor search(std::string_view provider, std::string_view query);
};

struct StoredResponse {
  int status = 0;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  // Errc name when the transaction failed (e.g. "Timeout", "NoTls").
  std::optional<std::string> error;

  std::optional<std::string> header(std::string_view name) const;
  // Rethrows a recorded failure as orgtrace::Error.
  void raise_if_error(std::string_view context) const;
};

struct TxnLogEntry {
  TxnKind kind;
  std::string key;
};

struct ArchiveProblem {
  std::string key;
  std::string problem;
};

class FixtureStore {
 public:
  // Live mode without an archive.
  FixtureStore();
  // Record mode creates `dir` if needed; replay mode reads its index now and
  // throws Error{ArchiveCorrupt} when it is malformed.
  FixtureStore(FixtureMode mode, std::filesystem::path dir);

  FixtureStore(const FixtureStore&) = delete;
  FixtureStore& operator=(const FixtureStore&) = delete;

  FixtureMode mode() const noexcept { return mode_; }
  const std::filesystem::path& directory() const noexcept { return dir_; }

  // Replay: archived response or Error{ReplayMiss}; record: run `live_call`
  // and persist; live: run `live_call`. Every call is appended to the log.
  StoredResponse transact(const Descriptor& descriptor,
                          const std::function<StoredResponse()>& live_call);

  StoredResponse replay_lookup(const Descriptor& descriptor) const;
  void record_transaction(const Descriptor& descriptor, const StoredResponse& response);

  std::vector<TxnLogEntry> transaction_log() const;
  void clear_log();

  // Integrity check of an archive directory; empty result means intact.
  static std::vector<ArchiveProblem> verify(const std::filesystem::path& dir);

 private:
  struct IndexEntry {
    TxnKind kind;
    std::string path;
    std::string timestamp;
  };

  void load_index();
  void write_index_locked() const;

  FixtureMode mode_ = FixtureMode::Live;
  std::filesystem::path dir_;
  std::map<std::string, IndexEntry> index_;
  mutable std::map<std::string, StoredResponse> loaded_;
  mutable std::mutex mutex_;
  std::vector<TxnLogEntry> log_;
};

// Serialization of a single transaction file (exposed for verification tools).
std::string encode_transaction(const Descriptor& descriptor, const StoredResponse& response);
// Throws Error{ArchiveCorrupt}; `key_out` receives the embedded key.
StoredResponse decode_transaction(std::string_view bytes, std::string* key_out = nullptr,
                                  std::string* kind_out = nullptr);

}  // namespace orgtrace
