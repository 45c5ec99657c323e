#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "orgtrace/domain.hpp"
#include "orgtrace/fixture_store.hpp"
#include "orgtrace/network.hpp"

namespace orgtrace {

struct CertificateSummary {
  std::string subject_common_name;
  std::optional<std::string> subject_organization;  // X.509 organizationName (O)
  std::string issuer_name;                          // RFC 2253 form
  std::vector<std::string> subject_alt_names;       // "DNS:..." / "IP:..."
  std::vector<std::string> policy_oids;
  std::int64_t not_before = 0;  // unix seconds
  std::int64_t not_after = 0;
};

enum class ValidationClass { EV, OV, DV };
std::string_view validation_class_name(ValidationClass cls);

class EvOidList {
 public:
  EvOidList() = default;
  explicit EvOidList(std::vector<std::string> oids);
  static EvOidList parse(std::string_view content);
  static const EvOidList& bundled();

  bool contains(std::string_view oid) const { return oids_.contains(std::string(oid)); }
  bool empty() const noexcept { return oids_.empty(); }

 private:
  std::unordered_set<std::string> oids_;
};

// Decodes a DER leaf certificate. Throws Error{FormatError}.
CertificateSummary decode_certificate(std::span<const unsigned char> der);
CertificateSummary decode_certificate(std::string_view der);

// One TLS handshake (SNI = fqdn) without chain validation.
// Throws NoTls, HandshakeFailure, Timeout, ReplayMiss.
CertificateSummary fetch_leaf_certificate(const Fqdn& fqdn, FixtureStore& store,
                                          LiveNetwork* network, NetTimeouts timeouts = {});

std::optional<std::string> org_from_certificate(const CertificateSummary& summary);
ValidationClass classify_validation(const CertificateSummary& summary, const EvOidList& ev_oids);

}  // namespace orgtrace
