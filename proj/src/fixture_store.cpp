#include "orgtrace/fixture_store.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"
#include "orgtrace/url.hpp"

namespace orgtrace {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMagic = "orgtrace-fixture/1";
constexpr std::string_view kIndexName = "index.tsv";

std::string sanitize_key_part(std::string_view s) {
  std::string out(text::trim(s));
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view fixture_mode_name(FixtureMode mode) {
  switch (mode) {
    case FixtureMode::Live: return "live";
    case FixtureMode::Record: return "record";
    case FixtureMode::Replay: return "replay";
  }
  return "live";
}

std::string_view txn_kind_name(TxnKind kind) {
  switch (kind) {
    case TxnKind::Http: return "http";
    case TxnKind::Whois: return "whois";
    case TxnKind::Tls: return "tls";
    case TxnKind::Search: return "search";
  }
  return "http";
}

std::optional<TxnKind> txn_kind_from_name(std::string_view name) {
  for (auto k : {TxnKind::Http, TxnKind::Whois, TxnKind::Tls, TxnKind::Search}) {
    if (txn_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

Descriptor Descriptor::http_get(const Url& url) { return {TxnKind::Http, "GET " + url.str()}; }

Descriptor Descriptor::whois(std::string_view server, std::string_view query) {
  return {TxnKind::Whois, "WHOIS " + text::lower(sanitize_key_part(server)) + " " + sanitize_key_part(query)};
}

Descriptor Descriptor::tls(std::string_view host, int port) {
  return {TxnKind::Tls, "TLS " + text::lower(sanitize_key_part(host)) + ":" + std::to_string(port)};
}

Descriptor Descriptor::search(std::string_view provider, std::string_view query) {
  return {TxnKind::Search,
          "SEARCH " + sanitize_key_part(provider) + " " + text::collapse_whitespace(sanitize_key_part(query))};
}

std::optional<std::string> StoredResponse::header(std::string_view name) const {
  for (const auto& [k, v] : headers) {
    if (text::iequals(k, name)) return v;
  }
  return std::nullopt;
}

void StoredResponse::raise_if_error(std::string_view context) const {
  if (error) throw Error(errc_from_name(*error), std::string(context));
}

std::string encode_transaction(const Descriptor& d, const StoredResponse& r) {
  std::ostringstream out;
  out << kMagic << "\n";
  out << "kind: " << txn_kind_name(d.kind) << "\n";
  out << "key: " << d.key << "\n";
  out << "status: " << r.status << "\n";
  if (r.error) out << "error: " << *r.error << "\n";
  for (const auto& [k, v] : r.headers) out << "header: " << k << ": " << sanitize_key_part(v) << "\n";
  out << "body-length: " << r.body.size() << "\n";
  out << "body-sha256: " << text::sha256_hex(r.body) << "\n\n";
  out << r.body;
  return out.str();
}

StoredResponse decode_transaction(std::string_view bytes, std::string* key_out, std::string* kind_out) {
  auto corrupt = [](const std::string& why) { return Error(Errc::ArchiveCorrupt, why); };
  const auto header_end = bytes.find("\n\n");
  if (header_end == std::string_view::npos) throw corrupt("missing header terminator");
  const auto lines = text::split_lines(bytes.substr(0, header_end));
  if (lines.empty() || lines[0] != kMagic) throw corrupt("bad magic line");

  StoredResponse r;
  std::optional<std::size_t> length;
  std::string digest;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw corrupt("malformed header line '" + line + "'");
    const auto name = std::string_view(line).substr(0, colon);
    const auto value = std::string_view(line).substr(colon + 2);
    if (name == "kind") {
      if (kind_out) *kind_out = std::string(value);
    } else if (name == "key") {
      if (key_out) *key_out = std::string(value);
    } else if (name == "status") {
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), r.status);
      if (ec != std::errc()) throw corrupt("bad status");
    } else if (name == "error") {
      r.error = std::string(value);
    } else if (name == "header") {
      const auto hc = value.find(": ");
      if (hc == std::string_view::npos) throw corrupt("malformed response header");
      r.headers.emplace_back(std::string(value.substr(0, hc)), std::string(value.substr(hc + 2)));
    } else if (name == "body-length") {
      std::size_t n = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc()) throw corrupt("bad body length");
      length = n;
    } else if (name == "body-sha256") {
      digest = std::string(value);
    }
  }
  if (!length) throw corrupt("missing body-length");
  const auto body = bytes.substr(header_end + 2);
  if (body.size() != *length) throw corrupt("body length mismatch");
  if (text::sha256_hex(body) != digest) throw corrupt("body digest mismatch");
  r.body = std::string(body);
  return r;
}

FixtureStore::FixtureStore() = default;

FixtureStore::FixtureStore(FixtureMode mode, fs::path dir) : mode_(mode), dir_(std::move(dir)) {
  if (mode_ == FixtureMode::Live) return;
  if (mode_ == FixtureMode::Record) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(Errc::IoError, "cannot create archive directory " + dir_.string());
    if (fs::exists(dir_ / kIndexName)) load_index();
    return;
  }
  if (!fs::is_directory(dir_)) throw Error(Errc::ArchiveCorrupt, "archive directory " + dir_.string() + " missing");
  load_index();
}

void FixtureStore::load_index() {
  const auto path = dir_ / kIndexName;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ArchiveCorrupt, "cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    const auto kind = cols.size() == 4 ? txn_kind_from_name(cols[1]) : std::nullopt;
    if (!kind) {
      throw Error(Errc::ArchiveCorrupt, path.string() + " line " + std::to_string(lineno) + ": malformed record");
    }
    index_[std::string(cols[0])] = IndexEntry{*kind, std::string(cols[2]), std::string(cols[3])};
  }
}

void FixtureStore::write_index_locked() const {
  const auto tmp = dir_ / "index.tsv.tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    for (const auto& [key, e] : index_) {
      out << key << '\t' << txn_kind_name(e.kind) << '\t' << e.path << '\t' << e.timestamp << '\n';
    }
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, dir_ / kIndexName);
}

StoredResponse FixtureStore::replay_lookup(const Descriptor& d) const {
  std::lock_guard lock(mutex_);
  if (auto hit = loaded_.find(d.key); hit != loaded_.end()) return hit->second;
  const auto it = index_.find(d.key);
  if (it == index_.end()) throw Error(Errc::ReplayMiss, "no archived transaction for '" + d.key + "'");
  const auto path = dir_ / it->second.path;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ArchiveCorrupt, "missing transaction file " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::string key;
  auto response = decode_transaction(bytes, &key);
  if (key != d.key) throw Error(Errc::ArchiveCorrupt, "key mismatch in " + path.string());
  loaded_.emplace(d.key, response);
  return response;
}

void FixtureStore::record_transaction(const Descriptor& d, const StoredResponse& r) {
  if (mode_ != FixtureMode::Record) throw Error(Errc::InvalidArgument, "store is not in record mode");
  std::lock_guard lock(mutex_);
  const std::string rel = std::string(txn_kind_name(d.kind)) + "/" + text::sha256_hex(d.key).substr(0, 16) + ".txn";
  fs::create_directories(dir_ / txn_kind_name(d.kind));
  {
    std::ofstream out(dir_ / rel, std::ios::binary | std::ios::trunc);
    out << encode_transaction(d, r);
    if (!out) throw Error(Errc::IoError, "cannot write " + (dir_ / rel).string());
  }
  index_[d.key] = IndexEntry{d.kind, rel, utc_timestamp()};
  loaded_[d.key] = r;
  write_index_locked();
}

StoredResponse FixtureStore::transact(const Descriptor& d, const std::function<StoredResponse()>& live_call) {
  {
    std::lock_guard lock(mutex_);
    log_.push_back({d.kind, d.key});
  }
  switch (mode_) {
    case FixtureMode::Replay:
      return replay_lookup(d);
    case FixtureMode::Record: {
      auto r = live_call();
      record_transaction(d, r);
      return r;
    }
    case FixtureMode::Live:
      break;
  }
  return live_call();
}

std::vector<TxnLogEntry> FixtureStore::transaction_log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

void FixtureStore::clear_log() {
  std::lock_guard lock(mutex_);
  log_.clear();
}

std::vector<ArchiveProblem> FixtureStore::verify(const fs::path& dir) {
  std::vector<ArchiveProblem> problems;
  FixtureStore store;
  store.dir_ = dir;
  try {
    store.load_index();
  } catch (const Error& e) {
    problems.push_back({"", e.what()});
    return problems;
  }
  if (store.index_.empty()) problems.push_back({"", "index is empty"});
  for (const auto& [key, entry] : store.index_) {
    std::ifstream in(dir / entry.path, std::ios::binary);
    if (!in) {
      problems.push_back({key, "missing file " + entry.path});
      continue;
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
      std::string embedded_key;
      std::string kind;
      decode_transaction(bytes, &embedded_key, &kind);
      if (embedded_key != key) problems.push_back({key, "file key differs: " + embedded_key});
      if (kind != txn_kind_name(entry.kind)) problems.push_back({key, "kind differs: " + kind});
    } catch (const Error& e) {
      problems.push_back({key, e.what()});
    }
  }
  return problems;
}

}  // namespace orgtrace
