#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "orgtrace/network.hpp"
#include "orgtrace/text.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return ORGTRACE_SOURCE_DIR; }
inline std::filesystem::path fixtures_dir() { return source_dir() / "fixtures"; }
inline std::filesystem::path archive_dir() { return fixtures_dir() / "archive"; }
inline std::filesystem::path test_data(const std::string& rel) { return source_dir() / "tests" / "data" / rel; }

inline std::string slurp(const std::filesystem::path& p) { return orgtrace::text::read_file(p.string()); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("orgtrace-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

// Scripted transport: answers from maps and counts calls.
class FakeNetwork final : public orgtrace::LiveNetwork {
 public:
  std::map<std::string, orgtrace::StoredResponse> http;   // by Url::str()
  std::map<std::string, orgtrace::StoredResponse> whois_;  // by "server query"
  std::map<std::string, orgtrace::StoredResponse> tls;    // by host
  std::map<std::string, orgtrace::StoredResponse> json;   // by Url::str()
  int calls = 0;

  orgtrace::StoredResponse http_get(const orgtrace::Url& url, const orgtrace::HttpRequestOptions&) override {
    return lookup(http, url.str());
  }
  orgtrace::StoredResponse whois(const std::string& server, const std::string& query,
                                 const orgtrace::NetTimeouts&) override {
    return lookup(whois_, server + " " + query);
  }
  orgtrace::StoredResponse tls_leaf(const std::string& host, int, const orgtrace::NetTimeouts&) override {
    return lookup(tls, host);
  }
  orgtrace::StoredResponse https_get_json(const orgtrace::Url& url, const orgtrace::NetTimeouts&) override {
    return lookup(json, url.str());
  }

 private:
  orgtrace::StoredResponse lookup(const std::map<std::string, orgtrace::StoredResponse>& m, const std::string& k) {
    ++calls;
    auto it = m.find(k);
    if (it != m.end()) return it->second;
    orgtrace::StoredResponse r;
    r.error = "TransportFailure";
    return r;
  }
};

inline orgtrace::StoredResponse html_page(const std::string& body, int status = 200) {
  orgtrace::StoredResponse r;
  r.status = status;
  r.headers = {{"Content-Type", "text/html"}};
  r.body = body;
  return r;
}

inline orgtrace::StoredResponse redirect_to(const std::string& location, int status = 301) {
  orgtrace::StoredResponse r;
  r.status = status;
  r.headers = {{"Location", location}};
  return r;
}

inline orgtrace::StoredResponse text_body(const std::string& body) {
  orgtrace::StoredResponse r;
  r.body = body;
  return r;
}

// Random string over a small alphabet that favors letters, spaces and
// punctuation found in names.
inline std::string random_text(std::mt19937_64& rng, std::size_t max_len, const std::string& alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
  return s;
}

// Runs a shell command, capturing stdout; returns the exit status.
inline int run_command(const std::string& cmd, std::string* out = nullptr) {
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::string buf;
  char chunk[4096];
  std::size_t n;
  while ((n = std::fread(chunk, 1, sizeof chunk, pipe)) > 0) buf.append(chunk, n);
  const int status = ::pclose(pipe);
  if (out) *out = buf;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace testing
