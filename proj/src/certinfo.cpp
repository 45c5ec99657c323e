#include "orgtrace/certinfo.hpp"

#include <arpa/inet.h>
#include <openssl/asn1.h>
#include <openssl/bio.h>
#include <openssl/objects.h>
#include <openssl/x509.h>
#include <openssl/x509v3.h>

#include <ctime>

#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

std::string asn1_utf8(const ASN1_STRING* s) {
  unsigned char* out = nullptr;
  const int len = ASN1_STRING_to_UTF8(&out, s);
  if (len < 0) return {};
  std::string value(reinterpret_cast<char*>(out), static_cast<std::size_t>(len));
  OPENSSL_free(out);
  return value;
}

std::optional<std::string> name_entry(X509_NAME* name, int nid) {
  const int idx = X509_NAME_get_index_by_NID(name, nid, -1);
  if (idx < 0) return std::nullopt;
  return asn1_utf8(X509_NAME_ENTRY_get_data(X509_NAME_get_entry(name, idx)));
}

std::string rfc2253(X509_NAME* name) {
  std::unique_ptr<BIO, decltype(&BIO_free)> bio(BIO_new(BIO_s_mem()), BIO_free);
  X509_NAME_print_ex(bio.get(), name, 0, XN_FLAG_RFC2253 & ~ASN1_STRFLGS_ESC_MSB);
  char* data = nullptr;
  const long len = BIO_get_mem_data(bio.get(), &data);
  return std::string(data, static_cast<std::size_t>(len));
}

std::int64_t unix_time(const ASN1_TIME* t) {
  std::tm tm{};
  if (!t || ASN1_TIME_to_tm(t, &tm) != 1) throw Error(Errc::FormatError, "certificate has an invalid validity time");
  return static_cast<std::int64_t>(timegm(&tm));
}

std::string ip_text(const ASN1_OCTET_STRING* ip) {
  char buf[INET6_ADDRSTRLEN] = {};
  const int len = ASN1_STRING_length(ip);
  const unsigned char* data = ASN1_STRING_get0_data(ip);
  if (len == 4) inet_ntop(AF_INET, data, buf, sizeof buf);
  else if (len == 16) inet_ntop(AF_INET6, data, buf, sizeof buf);
  return buf;
}

}  // namespace

std::string_view validation_class_name(ValidationClass cls) {
  switch (cls) {
    case ValidationClass::EV: return "EV";
    case ValidationClass::OV: return "OV";
    case ValidationClass::DV: return "DV";
  }
  return "DV";
}

EvOidList::EvOidList(std::vector<std::string> oids) {
  for (auto& o : oids) oids_.insert(std::string(text::trim(o)));
}

EvOidList EvOidList::parse(std::string_view content) { return EvOidList(text::config_lines(content)); }

const EvOidList& EvOidList::bundled() {
  static const EvOidList list = parse(text::load_resource("", "ev_oids.txt"));
  return list;
}

CertificateSummary decode_certificate(std::span<const unsigned char> der) {
  const unsigned char* p = der.data();
  std::unique_ptr<X509, decltype(&X509_free)> cert(d2i_X509(nullptr, &p, static_cast<long>(der.size())), X509_free);
  if (!cert) throw Error(Errc::FormatError, "not a DER-encoded X.509 certificate");

  CertificateSummary s;
  X509_NAME* subject = X509_get_subject_name(cert.get());
  s.subject_common_name = name_entry(subject, NID_commonName).value_or("");
  s.subject_organization = name_entry(subject, NID_organizationName);
  s.issuer_name = rfc2253(X509_get_issuer_name(cert.get()));
  s.not_before = unix_time(X509_get0_notBefore(cert.get()));
  s.not_after = unix_time(X509_get0_notAfter(cert.get()));

  if (auto* names = static_cast<GENERAL_NAMES*>(X509_get_ext_d2i(cert.get(), NID_subject_alt_name, nullptr, nullptr))) {
    for (int i = 0; i < sk_GENERAL_NAME_num(names); ++i) {
      const GENERAL_NAME* gn = sk_GENERAL_NAME_value(names, i);
      if (gn->type == GEN_DNS) s.subject_alt_names.push_back("DNS:" + asn1_utf8(gn->d.dNSName));
      else if (gn->type == GEN_IPADD) s.subject_alt_names.push_back("IP:" + ip_text(gn->d.iPAddress));
    }
    GENERAL_NAMES_free(names);
  }
  if (auto* policies =
          static_cast<CERTIFICATEPOLICIES*>(X509_get_ext_d2i(cert.get(), NID_certificate_policies, nullptr, nullptr))) {
    for (int i = 0; i < sk_POLICYINFO_num(policies); ++i) {
      char buf[128];
      OBJ_obj2txt(buf, sizeof buf, sk_POLICYINFO_value(policies, i)->policyid, 1);
      s.policy_oids.emplace_back(buf);
    }
    CERTIFICATEPOLICIES_free(policies);
  }
  return s;
}

CertificateSummary decode_certificate(std::string_view der) {
  return decode_certificate(
      std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(der.data()), der.size()));
}

CertificateSummary fetch_leaf_certificate(const Fqdn& fqdn, FixtureStore& store, LiveNetwork* network,
                                          NetTimeouts timeouts) {
  auto response = store.transact(Descriptor::tls(fqdn.text(), 443), [&] {
    if (!network) throw Error(Errc::TransportFailure, "no live network for TLS " + fqdn.text());
    return network->tls_leaf(fqdn.text(), 443, timeouts);
  });
  response.raise_if_error("TLS " + fqdn.text() + ":443");
  return decode_certificate(std::string_view(response.body));
}

std::optional<std::string> org_from_certificate(const CertificateSummary& summary) {
  if (!summary.subject_organization || text::trim(*summary.subject_organization).empty()) return std::nullopt;
  return summary.subject_organization;
}

ValidationClass classify_validation(const CertificateSummary& summary, const EvOidList& ev_oids) {
  for (const auto& oid : summary.policy_oids) {
    if (ev_oids.contains(oid)) return ValidationClass::EV;
  }
  return org_from_certificate(summary) ? ValidationClass::OV : ValidationClass::DV;
}

}  // namespace orgtrace
