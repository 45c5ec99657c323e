#include "orgtrace/whois.hpp"

#include <cctype>

#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

// Key before the first colon, lowercased with spaces removed.
std::string squash_key(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == ' ' || c == '\t') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::optional<std::string> field_value(std::string_view response, std::initializer_list<std::string_view> keys) {
  for (const auto& line : text::split_lines(response)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const auto key = squash_key(std::string_view(line).substr(0, colon));
    for (auto k : keys) {
      if (key == k) return std::string(text::trim(std::string_view(line).substr(colon + 1)));
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view registrant_kind_name(RegistrantKind kind) {
  switch (kind) {
    case RegistrantKind::Org: return "Org";
    case RegistrantKind::Redacted: return "Redacted";
    case RegistrantKind::Absent: return "Absent";
    case RegistrantKind::Empty: return "Empty";
  }
  return "Absent";
}

RedactionLexicon::RedactionLexicon(std::vector<std::string> entries) {
  for (auto& e : entries) {
    auto t = text::lower(text::trim(e));
    if (!t.empty()) entries_.push_back(std::move(t));
  }
  if (entries_.empty()) throw Error(Errc::ConfigError, "redaction lexicon is empty");
}

RedactionLexicon RedactionLexicon::parse(std::string_view content) {
  return RedactionLexicon(text::config_lines(content));
}

const RedactionLexicon& RedactionLexicon::bundled() {
  static const RedactionLexicon lexicon = parse(text::load_resource("", "redaction_lexicon.txt"));
  return lexicon;
}

bool redaction_match(std::string_view value, const RedactionLexicon& lexicon) {
  const auto folded = text::lower(value);
  for (const auto& e : lexicon.entries()) {
    if (folded.find(e) != std::string::npos) return true;
  }
  return false;
}

WhoisServerMap WhoisServerMap::parse(std::string_view content) {
  WhoisServerMap map;
  for (const auto& line : text::config_lines(content)) {
    auto cols = text::split(line, '\t');
    if (cols.size() < 2) throw Error(Errc::ConfigError, "malformed TLD server line '" + line + "'");
    map.servers_[text::lower(text::trim(cols[0]))] = text::lower(text::trim(cols[1]));
  }
  return map;
}

const WhoisServerMap& WhoisServerMap::bundled() {
  static const WhoisServerMap map = parse(text::load_resource("", "tld_servers.tsv"));
  return map;
}

std::string WhoisServerMap::server_for(const RegistrableDomain& domain) const {
  std::string suffix = domain.suffix;
  if (suffix.empty()) {
    const auto dot = domain.text.rfind('.');
    suffix = dot == std::string::npos ? domain.text : domain.text.substr(dot + 1);
  }
  // Multi-label suffixes first (co.uk), then the TLD itself.
  std::string_view probe = suffix;
  while (true) {
    if (auto it = servers_.find(std::string(probe)); it != servers_.end()) {
      if (it->second == "-") throw Error(Errc::NoServerForTld, "no WHOIS service for ." + std::string(probe));
      return it->second;
    }
    const auto dot = probe.find('.');
    if (dot == std::string_view::npos) break;
    probe = probe.substr(dot + 1);
  }
  if (probe.empty()) throw Error(Errc::NoServerForTld, "no TLD in " + domain.text);
  return "whois.nic." + std::string(probe);
}

std::optional<std::string> find_referral(std::string_view response) {
  auto v = field_value(response, {"registrarwhoisserver", "refer"});
  if (!v || v->empty()) return std::nullopt;
  std::string server = text::lower(*v);
  // Some registries print a URL here.
  if (auto sep = server.find("://"); sep != std::string::npos) server = server.substr(sep + 3);
  if (auto slash = server.find('/'); slash != std::string::npos) server.resize(slash);
  if (server.empty() || server.find(' ') != std::string::npos) return std::nullopt;
  return server;
}

WhoisClient::WhoisClient(FixtureStore& store, const WhoisServerMap& servers,
                         std::shared_ptr<LiveNetwork> network, NetTimeouts timeouts)
    : store_(store), servers_(servers), network_(std::move(network)), timeouts_(timeouts) {}

WhoisRecord WhoisClient::query(const RegistrableDomain& domain) const {
  WhoisRecord record;
  record.domain = domain;
  std::string server = servers_.server_for(domain);
  while (record.hops.size() < kMaxHops) {
    StoredResponse response;
    try {
      response = store_.transact(Descriptor::whois(server, domain.text), [&] {
        if (!network_) throw Error(Errc::TransportFailure, "no live network for WHOIS " + server);
        return network_->whois(server, domain.text, timeouts_);
      });
      response.raise_if_error("WHOIS " + server + " " + domain.text);
      if (text::trim(response.body).empty()) throw Error(Errc::EmptyResponse, "empty WHOIS reply from " + server);
    } catch (const Error&) {
      // A failed referral still leaves the registry's thin record usable.
      if (record.hops.empty()) throw;
      break;
    }
    auto body = text::sanitize_utf8(response.body);
    auto next = find_referral(body);
    record.hops.push_back({server, std::move(body)});
    if (!next || *next == server) break;
    server = *next;
  }
  for (std::size_t i = 0; i < record.hops.size(); ++i) {
    if (i) record.raw += "\n";
    record.raw += record.hops[i].response;
  }
  return record;
}

RegistrantResult parse_registrant(const WhoisRecord& record, const RedactionLexicon& lexicon) {
  for (std::size_t i = record.hops.size(); i-- > 0;) {
    auto value = field_value(record.hops[i].response, {"registrantorganization", "registrantorganisation"});
    if (!value) continue;
    RegistrantResult r;
    r.hop_index = i;
    if (value->empty()) {
      r.kind = RegistrantKind::Empty;
    } else if (redaction_match(*value, lexicon)) {
      r.kind = RegistrantKind::Redacted;
      r.value = *value;
    } else {
      r.kind = RegistrantKind::Org;
      r.value = *value;
    }
    return r;
  }
  if (record.hops.empty() && !record.raw.empty()) {
    WhoisRecord synthetic = record;
    synthetic.hops.push_back({"", record.raw});
    return parse_registrant(synthetic, lexicon);
  }
  return RegistrantResult{};
}

}  // namespace orgtrace
