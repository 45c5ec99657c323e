#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "orgtrace/audit.hpp"
#include "orgtrace/resolver.hpp"
#include "orgtrace/toolkit.hpp"
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

PolicyText policy_of(std::vector<std::string> ps) {
  PolicyText t;
  t.paragraphs = std::move(ps);
  t.full_text = text::join(t.paragraphs, "\n\n");
  return t;
}

RoiResult resolved(const std::string& fqdn, std::optional<std::string> org) {
  RoiResult r;
  r.input_fqdn = fqdn;
  r.organization = std::move(org);
  r.method = r.organization ? Method::Whois : Method::Unidentified;
  return r;
}

FlowRecord flow(const std::string& app, const std::string& dest, std::vector<std::string> types = {"device_id"}) {
  return FlowRecord{app, parse_fqdn(dest), std::move(types), FlowTransport::Https};
}

}  // namespace

TEST_CASE("flow ingestion") {
  std::istringstream in(
      "# comment\n"
      "app.a\tapi.x.example\thttps\tdevice_id, location\n"
      "app.b\tcdn.y.example\tHTTP\temail\r\n"
      "app.c\tz.example\thttps\t\n"
      "app.d\tbad..host\thttps\temail\n"
      "app.e\tz.example\tftp\temail\n"
      "only\ttwo\n"
      "\tz.example\thttps\temail\n");
  const auto r = ingest_flows(in);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[0].data_types == std::vector<std::string>{"device_id", "location"});
  CHECK(r.records[1].transport == FlowTransport::Http);
  REQUIRE(r.warnings.size() == 5);
  CHECK(r.warnings[0].rfind("line 4:", 0) == 0);
  std::istringstream strict("app.c\tz.example\thttps\t\n");
  CHECK(code_of([&] { ingest_flows(strict, true); }) == Errc::FormatError);
  std::istringstream empty("");
  CHECK(ingest_flows(empty).records.empty());
}

TEST_CASE("relations and head companies") {
  std::istringstream in("# c\nGitHub\tMicrosoft\nLinkedIn Corporation\tMicrosoft Corporation\n");
  const auto rel = parse_relations(in);
  REQUIRE(rel.size() == 2);
  CHECK(rollup_head("GitHub, Inc.", rel) == "Microsoft");
  CHECK(rollup_head("LinkedIn", rel) == "Microsoft Corporation");
  CHECK(rollup_head("Spotify AB", rel) == "Spotify AB");
  const OrgHierarchy h(rel);
  CHECK(h.head_key("GitHub") == h.head_key("LinkedIn"));

  std::vector<OrgRelation> deep = {{"A Ltd", "B Ltd"}, {"B Ltd", "C Inc."}, {"C Inc.", "D GmbH"}};
  CHECK(rollup_head("A", deep) == "D GmbH");

  std::vector<OrgRelation> cycle = {{"A", "B"}, {"B", "A"}};
  CHECK(code_of([&] { rollup_head("A", cycle); }) == Errc::CycleDetected);
  std::vector<OrgRelation> two = {{"A", "B"}, {"A Inc.", "C"}};
  CHECK(code_of([&] { OrgHierarchy{two}; }) == Errc::AmbiguousParent);
  std::vector<OrgRelation> repeated = {{"A", "B"}, {"A Inc.", "B Ltd"}};
  CHECK_NOTHROW(OrgHierarchy{repeated});
  std::vector<OrgRelation> self = {{"A Inc.", "A"}};
  CHECK(code_of([&] { OrgHierarchy{self}; }) == Errc::FormatError);
  std::istringstream bad("just one\n");
  CHECK(code_of([&] { parse_relations(bad); }) == Errc::FormatError);
}

TEST_CASE("property: rollup is idempotent") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing::random_disclosure_instance(rng);
    const OrgHierarchy h(inst.relations);
    for (const auto& name : testing::oracle_names()) {
      const auto head = h.head(name);
      CHECK(h.head(head) == head);
      CHECK(normalize_org(head).text == testing::oracle_head(name, inst.relations));
    }
  }
}

TEST_CASE("recipients per app") {
  const std::vector<FlowRecord> flows = {flow("a", "x.one.example"), flow("a", "y.two.example"),
                                         flow("b", "dark.example")};
  std::map<std::string, RoiResult> res = {{"x.one.example", resolved("x.one.example", "Same Org")},
                                          {"y.two.example", resolved("y.two.example", "Same Org")},
                                          {"dark.example", resolved("dark.example", std::nullopt)}};
  const auto m = recipients_per_app(flows, res);
  CHECK(m.per_app.at("a") == std::set<std::string>{"Same Org"});
  CHECK(m.per_app.at("b").empty());
  CHECK_FALSE(m.per_app.contains("c"));
  CHECK(m.flows_total == 3);
  CHECK(m.flows_resolved == 2);
  CHECK(m.flows_unidentified == 1);
  res.erase("dark.example");
  CHECK(code_of([&] { recipients_per_app(flows, res); }) == Errc::MissingResolution);
}

TEST_CASE("disclosed entities") {
  const auto& rules = EntityRules::bundled();
  const auto four = disclosed_entities(
      policy_of({"We share data with partners such as Meta, Unity, Google, Amazon for advertising."}), rules);
  CHECK(four == std::set<std::string>{"amazon", "google", "meta", "unity"});
  CHECK(disclosed_entities(policy_of({"We do not share your information with anyone at all."}), rules).empty());
  const auto dup = disclosed_entities(
      policy_of({"Analytics are provided by Google LLC.", "We also use Google to measure ads."}), rules);
  CHECK(dup == std::set<std::string>{"google"});
  const auto designated =
      disclosed_entities(policy_of({"Payments are processed by Sunrise Payments GmbH on our behalf."}), rules);
  CHECK(designated == std::set<std::string>{"sunrise payments"});
}

TEST_CASE("disclosure status") {
  const OrgHierarchy none;
  CHECK(classify_disclosure({"Meta", "Google"}, {"Meta", "Google", "Amazon"}, none) == DisclosureStatus::Full);
  CHECK(classify_disclosure({"Meta", "Google"}, {}, none) == DisclosureStatus::None);
  CHECK(classify_disclosure({"Meta", "Google"}, {"google"}, none) == DisclosureStatus::Partial);
  CHECK(classify_disclosure({}, {}, none) == DisclosureStatus::Full);
  CHECK(classify_disclosure({"Amazon Technologies, Inc."}, {"amazon"}, none) == DisclosureStatus::Full);
  std::vector<OrgRelation> rel = {{"Instagram", "Meta Platforms"}};
  CHECK(classify_disclosure({"Instagram LLC"}, {"Meta Platforms, Inc."}, OrgHierarchy(rel)) == DisclosureStatus::Full);
  CHECK(disclosure_status_name(DisclosureStatus::Partial) == "partial");
}

TEST_CASE("property: disclosure agrees with the set-algebra oracle") {
  std::mt19937_64 rng(33);
  int seen[3] = {0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing::random_disclosure_instance(rng);
    const auto got = classify_disclosure(inst.received, inst.disclosed, OrgHierarchy(inst.relations));
    const auto want = testing::oracle_disclosure(inst);
    CHECK(got == want);
    ++seen[static_cast<int>(want)];
  }
  for (int s : seen) CHECK(s > 50);
}

TEST_CASE("report over the walkthrough scenario") {
  Config c;
  c.mode = FixtureMode::Replay;
  c.fixture_dir = testing::archive_dir().string();
  Toolkit kit(c);
  const auto dir = testing::fixtures_dir() / "walkthrough";
  std::ifstream flows_in(dir / "flows.tsv");
  const auto flows = ingest_flows(flows_in, true).records;
  std::ifstream rel_in(dir / "relations.tsv");
  const auto relations = parse_relations(rel_in);

  std::vector<std::string> dests;
  for (const auto& f : flows) dests.push_back(f.destination.text());
  std::sort(dests.begin(), dests.end());
  dests.erase(std::unique(dests.begin(), dests.end()), dests.end());
  std::map<std::string, RoiResult> resolutions;
  for (auto& r : kit.resolver().resolve_batch(dests, 2)) resolutions.emplace(r.input_fqdn, r);

  std::map<std::string, PolicyText> policies;
  for (const auto& e : std::filesystem::directory_iterator(dir / "policies")) {
    policies.emplace(e.path().stem().string(), extract_text(testing::slurp(e.path())));
  }
  const auto report = build_report(flows, resolutions, policies, OrgHierarchy(relations), EntityRules::bundled(),
                                   SuffixRules::bundled());
  CHECK(report.full == 1);
  CHECK(report.partial == 1);
  CHECK(report.none == 1);
  CHECK(report.no_policy_apps == std::vector<std::string>{"app.delta"});
  REQUIRE(report.apps.size() == 3);
  for (const auto& a : report.apps) {
    CAPTURE(a.app_id);
    if (a.app_id == "app.alpha") CHECK(a.status == DisclosureStatus::Full);
    if (a.app_id == "app.beta") CHECK(a.status == DisclosureStatus::Partial);
    if (a.app_id == "app.gamma") CHECK(a.status == DisclosureStatus::None);
  }
  CHECK(report.apps_per_head.at("bytedance") == 1);
  CHECK(report.apps_per_head.at("mobile ads network") == 2);
  CHECK(report.head_display.at("bytedance") == "ByteDance Ltd.");
  CHECK(report.apps_per_data_type.at("advertising_id") == 4);
  CHECK(report.apps_per_destination.at("mobile-ads.example") == 2);
  CHECK(report.per_org.at("acme analytics").disclosed == 2);
  CHECK(report.per_org.at("backend holdings").undisclosed == 1);
  CHECK(report.flows_total == 8);
  CHECK(report.flows_resolved == 7);

  // Aggregates equal sums over the per-app rows.
  std::size_t disclosed = 0, undisclosed = 0, received = 0;
  for (const auto& [k, v] : report.per_org) {
    disclosed += v.disclosed;
    undisclosed += v.undisclosed;
  }
  for (const auto& a : report.apps) received += a.received.size();
  CHECK(disclosed + undisclosed == received);

  const auto j = nlohmann::json::parse(report_json(report));
  CHECK(j["status_counts"]["full"] == 1);
  CHECK(j["no_policy_apps"][0] == "app.delta");
  CHECK(render_report(report).find("app.gamma") != std::string::npos);
}

TEST_CASE("every app missing its policy") {
  const std::vector<FlowRecord> flows = {flow("a", "x.example"), flow("b", "y.example")};
  std::map<std::string, RoiResult> res = {{"x.example", resolved("x.example", "X Corp")},
                                          {"y.example", resolved("y.example", "Y Corp")}};
  const auto r = build_report(flows, res, {}, OrgHierarchy{}, EntityRules::bundled(), SuffixRules::bundled());
  CHECK(r.full + r.partial + r.none == 0);
  CHECK(r.no_policy_apps.size() == 2);
  CHECK(r.apps_per_head.size() == 2);
}
