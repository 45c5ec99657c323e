#include <memory>

#include <openssl/evp.h>
#include <openssl/x509.h>
#include <openssl/x509v3.h>

#include "doctest.h"
#include "orgtrace/certinfo.hpp"
#include "orgtrace/error.hpp"
#include "support.hpp"

using namespace orgtrace;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InvalidArgument;
}

CertificateSummary archived(const std::string& host) {
  FixtureStore store(FixtureMode::Replay, testing::archive_dir());
  return fetch_leaf_certificate(parse_fqdn(host), store, nullptr);
}

// Self-signed Ed25519 leaf built in memory.
std::string make_der(const std::string& cn, const char* org, const char* sans, const char* policy) {
  std::unique_ptr<EVP_PKEY, decltype(&EVP_PKEY_free)> key(EVP_PKEY_Q_keygen(nullptr, nullptr, "ED25519"),
                                                          EVP_PKEY_free);
  std::unique_ptr<X509, decltype(&X509_free)> x(X509_new(), X509_free);
  X509_set_version(x.get(), 2);
  ASN1_INTEGER_set(X509_get_serialNumber(x.get()), 7);
  ASN1_TIME_set(X509_getm_notBefore(x.get()), 1700000000);
  ASN1_TIME_set(X509_getm_notAfter(x.get()), 1800000000);
  X509_NAME* name = X509_get_subject_name(x.get());
  X509_NAME_add_entry_by_txt(name, "CN", MBSTRING_UTF8, reinterpret_cast<const unsigned char*>(cn.c_str()), -1, -1, 0);
  if (org) X509_NAME_add_entry_by_txt(name, "O", MBSTRING_UTF8, reinterpret_cast<const unsigned char*>(org), -1, -1, 0);
  X509_set_issuer_name(x.get(), name);
  X509_set_pubkey(x.get(), key.get());
  X509V3_CTX ctx;
  X509V3_set_ctx_nodb(&ctx);
  X509V3_set_ctx(&ctx, x.get(), x.get(), nullptr, nullptr, 0);
  if (sans) {
    X509_EXTENSION* ext = X509V3_EXT_conf_nid(nullptr, &ctx, NID_subject_alt_name, sans);
    X509_add_ext(x.get(), ext, -1);
    X509_EXTENSION_free(ext);
  }
  if (policy) {
    CERTIFICATEPOLICIES* policies = sk_POLICYINFO_new_null();
    POLICYINFO* info = POLICYINFO_new();
    ASN1_OBJECT_free(info->policyid);
    info->policyid = OBJ_txt2obj(policy, 1);
    sk_POLICYINFO_push(policies, info);
    X509_add1_ext_i2d(x.get(), NID_certificate_policies, policies, 0, X509V3_ADD_DEFAULT);
    CERTIFICATEPOLICIES_free(policies);
  }
  X509_sign(x.get(), key.get(), nullptr);
  unsigned char* buf = nullptr;
  const int n = i2d_X509(x.get(), &buf);
  std::string der(reinterpret_cast<char*>(buf), static_cast<std::size_t>(n));
  OPENSSL_free(buf);
  return der;
}

}  // namespace

TEST_CASE("archived certificates decode and classify") {
  const auto& ev = EvOidList::bundled();
  const auto acme = archived("acme-analytics.example");
  CHECK(acme.subject_common_name == "acme-analytics.example");
  CHECK(org_from_certificate(acme) == "Acme Analytics GmbH");
  CHECK(classify_validation(acme, ev) == ValidationClass::EV);
  CHECK(acme.issuer_name.find("Fixture Issuing CA 1") != std::string::npos);
  CHECK(acme.subject_alt_names ==
        std::vector<std::string>{"DNS:acme-analytics.example", "DNS:collect.acme-analytics.example"});
  CHECK(acme.not_before < acme.not_after);

  const auto backend = archived("backend-only.example");
  CHECK(classify_validation(backend, ev) == ValidationClass::OV);
  CHECK(org_from_certificate(backend) == "Backend Holdings LLC");

  const auto dv = archived("redirect-same.example");
  CHECK(classify_validation(dv, ev) == ValidationClass::DV);
  CHECK_FALSE(org_from_certificate(dv));
}

TEST_CASE("a host without TLS") {
  FixtureStore store(FixtureMode::Replay, testing::archive_dir());
  CHECK(code_of([&] { fetch_leaf_certificate(parse_fqdn("httponly-tracker.example"), store, nullptr); }) ==
        Errc::NoTls);
  CHECK(code_of([&] { fetch_leaf_certificate(parse_fqdn("other.example"), store, nullptr); }) == Errc::ReplayMiss);
}

TEST_CASE("live handshakes go through the network interface") {
  auto net = std::make_shared<testing::FakeNetwork>();
  net->tls["shop.example"] = testing::text_body(make_der("shop.example", "Shop GmbH", "DNS:shop.example", nullptr));
  StoredResponse refused;
  refused.error = "HandshakeFailure";
  net->tls["broken.example"] = refused;
  FixtureStore store;
  CHECK(*org_from_certificate(fetch_leaf_certificate(parse_fqdn("shop.example"), store, net.get())) == "Shop GmbH");
  CHECK(code_of([&] { fetch_leaf_certificate(parse_fqdn("broken.example"), store, net.get()); }) ==
        Errc::HandshakeFailure);
  CHECK(code_of([&] { fetch_leaf_certificate(parse_fqdn("shop.example"), store, nullptr); }) ==
        Errc::TransportFailure);
}

TEST_CASE("decoding a generated certificate") {
  const auto der = make_der("x.example", "Soci\xC3\xA9t\xC3\xA9 Exemple SA", "DNS:x.example,DNS:*.x.example,IP:192.0.2.7",
                            "2.23.140.1.2.2");
  const auto s = decode_certificate(std::string_view(der));
  CHECK(s.subject_common_name == "x.example");
  CHECK(s.subject_organization == "Soci\xC3\xA9t\xC3\xA9 Exemple SA");
  CHECK(s.subject_alt_names == std::vector<std::string>{"DNS:x.example", "DNS:*.x.example", "IP:192.0.2.7"});
  CHECK(s.policy_oids == std::vector<std::string>{"2.23.140.1.2.2"});
  CHECK(s.not_before == 1700000000);
  CHECK(s.not_after == 1800000000);
  CHECK(classify_validation(s, EvOidList::bundled()) == ValidationClass::OV);

  const auto bare = decode_certificate(std::string_view(make_der("bare.example", nullptr, nullptr, nullptr)));
  CHECK(bare.subject_alt_names.empty());
  CHECK(bare.policy_oids.empty());
  CHECK(classify_validation(bare, EvOidList::bundled()) == ValidationClass::DV);
}

TEST_CASE("EV needs an EV policy OID even without an organization") {
  CertificateSummary s;
  s.policy_oids = {"1.2.3", "2.23.140.1.1"};
  CHECK(classify_validation(s, EvOidList::bundled()) == ValidationClass::EV);
  CHECK(classify_validation(s, EvOidList{}) == ValidationClass::DV);
  s.subject_organization = "   ";
  CHECK_FALSE(org_from_certificate(s));
  const auto custom = EvOidList::parse("# x\n1.2.3\n");
  CHECK(custom.contains("1.2.3"));
  CHECK(classify_validation(s, custom) == ValidationClass::EV);
  CHECK(validation_class_name(ValidationClass::OV) == "OV");
}

TEST_CASE("malformed DER") {
  CHECK(code_of([] { decode_certificate(std::string_view("not a certificate")); }) == Errc::FormatError);
  CHECK(code_of([] { decode_certificate(std::string_view("")); }) == Errc::FormatError);
  auto der = make_der("t.example", nullptr, nullptr, nullptr);
  der.resize(der.size() / 2);
  CHECK(code_of([&] { decode_certificate(std::string_view(der)); }) == Errc::FormatError);
}
