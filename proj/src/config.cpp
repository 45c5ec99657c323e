#include "orgtrace/config.hpp"

#include <functional>
#include <map>

#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace fs = std::filesystem;

namespace {

double to_double(const std::string& v, const std::string& where) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(Errc::ConfigError, where + ": '" + v + "' is not a number");
}

long to_long(const std::string& v, const std::string& where) {
  try {
    std::size_t used = 0;
    const long n = std::stol(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw Error(Errc::ConfigError, where + ": '" + v + "' is not an integer");
}

}  // namespace

Config Config::parse(std::string_view content, const fs::path& base_dir) {
  Config c;
  auto path_value = [&](std::string& field) {
    return [&field, &base_dir](const std::string& v, const std::string& where) {
      fs::path p(v);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      if (!fs::exists(p)) throw Error(Errc::ConfigError, where + ": file " + p.string() + " does not exist");
      field = p.string();
    };
  };
  auto dir_value = [&](std::string& field) {
    return [&field, &base_dir](const std::string& v, const std::string&) {
      fs::path p(v);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      field = p.string();
    };
  };

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"max_requests_per_domain",
       [&](const std::string& v, const std::string& w) { c.fetch.max_requests_per_domain = static_cast<int>(to_long(v, w)); }},
      {"connect_timeout", [&](const std::string& v, const std::string& w) { c.fetch.connect_timeout = to_double(v, w); }},
      {"total_timeout", [&](const std::string& v, const std::string& w) { c.fetch.total_timeout = to_double(v, w); }},
      {"max_redirects",
       [&](const std::string& v, const std::string& w) { c.fetch.max_redirects = static_cast<int>(to_long(v, w)); }},
      {"accept_language", [&](const std::string& v, const std::string&) { c.fetch.accept_language = v; }},
      {"user_agent", [&](const std::string& v, const std::string&) { c.fetch.user_agent = v; }},
      {"link_lexicon", path_value(c.link_lexicon)},
      {"controller_lexicon", path_value(c.controller_lexicon)},
      {"designators", path_value(c.designators)},
      {"triggers", path_value(c.triggers)},
      {"generic_blocklist", path_value(c.generic_blocklist)},
      {"known_orgs", path_value(c.known_orgs)},
      {"redaction_lexicon", path_value(c.redaction_lexicon)},
      {"suffix_rules", path_value(c.suffix_rules)},
      {"tld_servers", path_value(c.tld_servers)},
      {"ev_oids", path_value(c.ev_oids)},
      {"model", path_value(c.model)},
      {"language_margin", [&](const std::string& v, const std::string& w) { c.language_margin = to_double(v, w); }},
      {"search_provider",
       [&](const std::string& v, const std::string& w) {
         if (v != "google-cse" && v != "none") throw Error(Errc::ConfigError, w + ": unknown search provider '" + v + "'");
         c.search_provider = v;
       }},
      {"search_limit",
       [&](const std::string& v, const std::string& w) {
         const long n = to_long(v, w);
         if (n <= 0) throw Error(Errc::ConfigError, w + ": search_limit must be positive");
         c.search_limit = static_cast<std::size_t>(n);
       }},
      {"cache_dir", dir_value(c.cache_dir)},
      {"cache_ttl_days", [&](const std::string& v, const std::string& w) { c.cache_ttl_days = static_cast<int>(to_long(v, w)); }},
      {"fixture_mode",
       [&](const std::string& v, const std::string& w) {
         if (v == "live") c.mode = FixtureMode::Live;
         else if (v == "record") c.mode = FixtureMode::Record;
         else if (v == "replay") c.mode = FixtureMode::Replay;
         else throw Error(Errc::ConfigError, w + ": fixture_mode must be live, record or replay");
       }},
      {"fixture_dir", dir_value(c.fixture_dir)},
      {"parallelism",
       [&](const std::string& v, const std::string& w) {
         const long n = to_long(v, w);
         if (n <= 0) throw Error(Errc::ConfigError, w + ": parallelism must be positive");
         c.parallelism = static_cast<std::size_t>(n);
       }},
  };

  std::size_t lineno = 0;
  for (const auto& raw : text::split_lines(content)) {
    ++lineno;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "config line " + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::ConfigError, where + ": expected key = value");
    const auto key = text::lower(text::trim(line.substr(0, eq)));
    const std::string value(text::trim(line.substr(eq + 1)));
    if (key.starts_with("search_key") || key.starts_with("search_cx") || key == "api_key") {
      throw Error(Errc::ConfigError,
                  where + ": search credentials are read from ORGTRACE_SEARCH_KEY / ORGTRACE_SEARCH_CX only");
    }
    auto it = setters.find(key);
    if (it == setters.end()) throw Error(Errc::ConfigError, where + ": unknown key '" + key + "'");
    it->second(value, where);
  }
  try {
    c.fetch.validate();
  } catch (const Error& e) {
    throw Error(Errc::ConfigError, e.what());
  }
  return c;
}

Config Config::load(const fs::path& path) {
  std::string content;
  try {
    content = text::read_file(path.string());
  } catch (const Error&) {
    throw Error(Errc::ConfigError, "cannot read config " + path.string());
  }
  return parse(content, path.parent_path());
}

}  // namespace orgtrace
