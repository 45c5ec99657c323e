#pragma once

// key = value configuration. Every key is optional; an empty config uses the
// bundled resources and replays nothing until a mode is chosen.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "orgtrace/fetch.hpp"
#include "orgtrace/fixture_store.hpp"

namespace orgtrace {

struct Config {
  FetchPolicy fetch;

  // Empty path = bundled resource.
  std::string link_lexicon;
  std::string controller_lexicon;
  std::string designators;
  std::string triggers;
  std::string generic_blocklist;
  std::string known_orgs;
  std::string redaction_lexicon;
  std::string suffix_rules;
  std::string tld_servers;
  std::string ev_oids;
  std::string model;
  double language_margin = 0.02;

  std::string search_provider = "google-cse";  // or "none"
  std::size_t search_limit = 10;

  std::string cache_dir;
  int cache_ttl_days = 30;

  FixtureMode mode = FixtureMode::Live;
  std::string fixture_dir;
  std::size_t parallelism = 4;

  // Throws Error{ConfigError} with the line number; relative paths are taken
  // from `base_dir`.
  static Config parse(std::string_view content, const std::filesystem::path& base_dir = {});
  static Config load(const std::filesystem::path& path);
};

}  // namespace orgtrace
