#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "orgtrace/domain.hpp"
#include "orgtrace/fixture_store.hpp"
#include "orgtrace/network.hpp"

namespace orgtrace {

struct WhoisHop {
  std::string server;
  std::string response;
};

struct WhoisRecord {
  RegistrableDomain domain;
  std::vector<WhoisHop> hops;
  std::string raw;  // all hop responses, in query order
};

enum class RegistrantKind { Org, Redacted, Absent, Empty };
std::string_view registrant_kind_name(RegistrantKind kind);

struct RegistrantResult {
  RegistrantKind kind = RegistrantKind::Absent;
  std::string value;  // set for Org and Redacted
  std::size_t hop_index = 0;
};

class RedactionLexicon {
 public:
  explicit RedactionLexicon(std::vector<std::string> entries);
  static RedactionLexicon parse(std::string_view content);
  static const RedactionLexicon& bundled();

  const std::vector<std::string>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::string> entries_;
};

bool redaction_match(std::string_view value, const RedactionLexicon& lexicon);

// TLD -> WHOIS server; a server of "-" marks a TLD with no WHOIS service.
class WhoisServerMap {
 public:
  static WhoisServerMap parse(std::string_view content);
  static const WhoisServerMap& bundled();

  // Throws Error{NoServerForTld}.
  std::string server_for(const RegistrableDomain& domain) const;

 private:
  std::unordered_map<std::string, std::string> servers_;
};

// Registrar server named by a "Registrar WHOIS Server:" or "refer:" line.
std::optional<std::string> find_referral(std::string_view response);

class WhoisClient {
 public:
  static constexpr std::size_t kMaxHops = 3;

  WhoisClient(FixtureStore& store, const WhoisServerMap& servers,
              std::shared_ptr<LiveNetwork> network, NetTimeouts timeouts = {});

  // Throws NoServerForTld, Timeout, EmptyResponse, ReplayMiss, TransportFailure.
  WhoisRecord query(const RegistrableDomain& domain) const;

 private:
  FixtureStore& store_;
  const WhoisServerMap& servers_;
  std::shared_ptr<LiveNetwork> network_;
  NetTimeouts timeouts_;
};

RegistrantResult parse_registrant(const WhoisRecord& record, const RedactionLexicon& lexicon);

}  // namespace orgtrace
